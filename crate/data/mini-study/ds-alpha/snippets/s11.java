class Snippet11 {
    int run(int n, int x) {
        for (int i = 0; i < n; i++) {
            while (x > 0) {
                if (x > 4) {
                    x = x + 7;
                } else {
                    x = x + 3;
                    x = x + 4;
                }
                x = x - 1;
            }
            x = x + 3;
        }
        x = x + 3;
        return x;
    }
}
