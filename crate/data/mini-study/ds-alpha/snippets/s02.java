class Snippet02 {
    int run(int n, int x) {
        x = x + 7;
        return x;
    }
}
