package jlib;

import java.util.List;

public class Repo {
    public static String NAME = "repo";

    public String find(int id) {
        return null;
    }

    public List<String> all() {
        return null;
    }

    public int count() {
        return 0;
    }
}
