package legacy;

public class TaxRules {
    public double rate() {
        return 0.2;
    }
}
