int snippet07(int n, int x) {
    for (int i = 0; i < n; i++) {
        while (x > 8) {
            while (x > 7) {
                x = x + 3;
                x = x - 1;
            }
            x = x + 8;
            x = x - 1;
        }
    }
    return x;
}
