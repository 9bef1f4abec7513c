function snippet08(n, x) {
    while (x > 0) {
        if (x > 5) {
            if (x > 0) {
                x = x + 7;
            }
        }
        x = x - 1;
    }
    while (x > 5) {
        x = x + 2;
        x = x - 1;
    }
    return x;
}
