class Snippet12 {
    int run(int n, int x) {
        while (x > 8) {
            x = x + 1;
            x = x - 1;
        }
        x = x + 3;
        return x;
    }
}
