package jlib;

public @interface JvmStatic {
}
