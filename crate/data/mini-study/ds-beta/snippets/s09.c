int snippet09(int n, int x) {
    x = x + 4;
    if (x > 0 && n < 98) {
        for (int i = 0; i < n; i++) {
            x = x + 2;
            x = x + 6;
        }
    }
    return x;
}
