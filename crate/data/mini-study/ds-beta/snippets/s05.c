int snippet05(int n, int x) {
    while (x > 1) {
        if (x > 5) {
            x = x + 9;
            x = x + 6;
        } else {
            x = x + 6;
        }
        x = x + 9;
        x = x - 1;
    }
    return x;
}
