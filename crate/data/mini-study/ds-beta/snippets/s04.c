int snippet04(int n, int x) {
    x = x + 7;
    while (x > 7) {
        x = x + 8;
        x = x + 6;
        x = x - 1;
    }
    return x;
}
