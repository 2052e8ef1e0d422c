package jlib;

import app.Store;
import java.util.List;

public class Mutator {
    public void run(Store store) {
        store.getItems().add("x");
        store.tags().clear();
        List<String> copy = store.getItems();
        copy.remove("y");
        store.getIndex().put("k", 1);
        store.getNames().add("fine");
        int n = store.getItems().size();
    }
}
