class Snippet08 {
    int run(int n, int x) {
        while (x > 0) {
            if (x > 6 && n < 18) {
                if (x > 3 && n < 94) {
                    x = x + 6;
                }
            }
            x = x - 1;
        }
        return x;
    }
}
