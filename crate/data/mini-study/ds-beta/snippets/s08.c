int snippet08(int n, int x) {
    x = x + 3;
    return x;
}
