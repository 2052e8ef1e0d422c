package app;

import java.util.List;
import java.util.Map;
import java.io.*;
import lib.Util;
import static lib.Util.twice;

public class A {
    public List<String> names(Map<String, Integer> m) {
        return null;
    }

    public int four() {
        return Util.twice(2) + twice(1);
    }
}
