class Snippet10 {
    int run(int n, int x) {
        for (int i = 0; i < n; i++) {
            for (int i = 0; i < n; i++) {
                x = x + 5;
                if (x > 0) {
                    x = x + 9;
                    x = x + 3;
                }
            }
            if (x > 7) {
                if (x > 4 && n < 14) {
                    x = x + 2;
                }
            }
        }
        if (x > 2 && n < 91) {
            if (x > 7 && n < 84) {
                x = x + 7;
            }
            x = x + 8;
        }
        return x;
    }
}
