package jlib;

public class JUser {
    private String name;

    public JUser(String name) {
        this.name = name;
    }

    public String getName() {
        return name;
    }
}
