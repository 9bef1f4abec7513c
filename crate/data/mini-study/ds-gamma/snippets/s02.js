function snippet02(n, x) {
    for (let i = 0; i < n; i++) {
        if (x > 8) {
            if (x > 2) {
                x = x + 8;
            } else {
                x = x + 3;
                x = x + 4;
            }
            if (x > 1) {
                x = x + 7;
                x = x + 4;
            } else {
                x = x + 4;
                x = x + 4;
            }
        }
    }
    return x;
}
