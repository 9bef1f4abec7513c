function snippet14(n, x) {
    if (x > 2 && n < 97) {
        if (x > 2) {
            if (x > 8) {
                x = x + 4;
            } else {
                x = x + 8;
                x = x + 5;
            }
            x = x + 7;
        }
        for (let i = 0; i < n; i++) {
            x = x + 5;
            x = x + 8;
        }
    }
    return x;
}
