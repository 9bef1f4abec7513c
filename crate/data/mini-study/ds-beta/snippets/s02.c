int snippet02(int n, int x) {
    for (int i = 0; i < n; i++) {
        for (int i = 0; i < n; i++) {
            while (x > 7) {
                x = x + 2;
                x = x - 1;
            }
        }
        while (x > 7 && n < 69) {
            x = x + 4;
            x = x + 6;
            x = x - 1;
        }
    }
    if (x > 5 && n < 62) {
        x = x + 4;
    } else {
        x = x + 2;
    }
    return x;
}
