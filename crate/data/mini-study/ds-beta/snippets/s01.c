int snippet01(int n, int x) {
    if (x > 3) {
        if (x > 9) {
            if (x > 1) {
                x = x + 2;
            }
        }
    }
    return x;
}
