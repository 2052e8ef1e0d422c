package lib;

public class Mailer {
    private final String host;

    public Mailer(String host, int port, String user, String password,
                  boolean tls, int timeout, int retries, String from) {
        this.host = host;
    }

    public void send(String to, String cc, String bcc, String subject,
                     String body, boolean html, int priority) {
    }

    public int six(int a, int b, int c, int d, int e, int f) {
        return a + b + c + d + e + f;
    }
}
