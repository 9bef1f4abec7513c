class Snippet06 {
    int run(int n, int x) {
        for (int i = 0; i < n; i++) {
            x = x + 7;
        }
        return x;
    }
}
