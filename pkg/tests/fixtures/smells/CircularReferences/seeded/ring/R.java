package ring;

public class R extends P {
    public static R make() {
        return new R();
    }
}
