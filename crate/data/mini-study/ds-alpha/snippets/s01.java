class Snippet01 {
    int run(int n, int x) {
        if (x > 2 && n < 28) {
            x = x + 9;
            if (x > 2) {
                x = x + 3;
            }
        }
        return x;
    }
}
