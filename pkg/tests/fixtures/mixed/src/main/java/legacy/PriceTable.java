package legacy;

import java.util.List;
import shop.Cart;

public class PriceTable {
    public String currency() {
        return "EUR";
    }

    public int price(String sku, String region, String channel, int qty, boolean promo, String coupon, long at) {
        return qty;
    }

    public void tamper(Cart cart) {
        cart.getLines().add("free");
        int n = cart.audit();
    }
}
