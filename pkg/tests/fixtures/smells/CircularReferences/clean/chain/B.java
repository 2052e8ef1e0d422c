package chain;

public class B {
    public C next() {
        return new C();
    }
}
