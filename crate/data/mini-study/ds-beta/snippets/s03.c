int snippet03(int n, int x) {
    x = x + 3;
    for (int i = 0; i < n; i++) {
        for (int i = 0; i < n; i++) {
            for (int i = 0; i < n; i++) {
                x = x + 7;
            }
        }
        if (x > 2) {
            if (x > 2) {
                x = x + 7;
                x = x + 9;
            }
            while (x > 5) {
                x = x + 9;
                x = x + 7;
                x = x - 1;
            }
        } else {
            x = x + 9;
            if (x > 8 && n < 89) {
                x = x + 9;
            } else {
                x = x + 1;
                x = x + 5;
            }
        }
    }
    return x;
}
