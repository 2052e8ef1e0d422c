package jlib;

public class Fine {
    @JvmStatic
    public static void a() {
    }

    @Deprecated
    public int b;

    @JvmOverloads
    public void c(int x) {
    }

    @Override
    public String toString() {
        return "fine";
    }
}
