class Snippet07 {
    int run(int n, int x) {
        if (x > 6) {
            if (x > 5) {
                x = x + 2;
            } else {
                x = x + 4;
            }
            x = x + 3;
        }
        for (int i = 0; i < n; i++) {
            x = x + 1;
        }
        return x;
    }
}
