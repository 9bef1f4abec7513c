class Snippet09 {
    int run(int n, int x) {
        if (x > 1) {
            if (x > 7 && n < 43) {
                if (x > 8) {
                    x = x + 5;
                    x = x + 2;
                }
            }
        }
        return x;
    }
}
