package ring;

public class P {
    public Object next() {
        return new Q();
    }
}
