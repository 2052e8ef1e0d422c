package jlib;

public interface JShape {
    double area();
}
