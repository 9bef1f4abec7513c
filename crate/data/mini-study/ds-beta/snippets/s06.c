int snippet06(int n, int x) {
    if (x > 5 && n < 22) {
        x = x + 2;
        x = x + 5;
    }
    x = x + 4;
    return x;
}
