function snippet01(n, x) {
    while (x > 5 && n < 76) {
        x = x + 8;
        x = x + 5;
        x = x - 1;
    }
    x = x + 1;
    return x;
}
