package shop;

public class Customer {
    public void place(Order order) {
    }
}
