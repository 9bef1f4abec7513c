class Snippet04 {
    int run(int n, int x) {
        x = x + 7;
        return x;
    }
}
