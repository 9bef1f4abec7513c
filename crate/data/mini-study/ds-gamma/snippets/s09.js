function snippet09(n, x) {
    if (x > 2 && n < 38) {
        x = x + 9;
    }
    if (x > 4) {
        x = x + 3;
        x = x + 9;
    }
    return x;
}
