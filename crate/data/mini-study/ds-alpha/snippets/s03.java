class Snippet03 {
    int run(int n, int x) {
        while (x > 9) {
            x = x + 3;
            x = x - 1;
        }
        x = x + 5;
        return x;
    }
}
