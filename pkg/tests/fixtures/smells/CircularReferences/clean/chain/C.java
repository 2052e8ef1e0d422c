package chain;

public class C {
    public int value() {
        return 1;
    }
}
