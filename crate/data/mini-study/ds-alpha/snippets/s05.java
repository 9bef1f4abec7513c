class Snippet05 {
    int run(int n, int x) {
        if (x > 0 && n < 89) {
            x = x + 9;
            x = x + 7;
        } else {
            x = x + 5;
        }
        return x;
    }
}
