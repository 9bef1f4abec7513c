int snippet10(int n, int x) {
    for (int i = 0; i < n; i++) {
        x = x + 5;
        while (x > 0 && n < 39) {
            if (x > 7) {
                x = x + 9;
                x = x + 9;
            }
            while (x > 2) {
                x = x + 7;
                x = x + 7;
                x = x - 1;
            }
            x = x - 1;
        }
    }
    if (x > 3) {
        while (x > 5) {
            if (x > 8) {
                x = x + 9;
            }
            x = x - 1;
        }
        x = x + 8;
    } else {
        while (x > 5) {
            x = x + 8;
            x = x - 1;
        }
    }
    return x;
}
