function snippet03(n, x) {
    if (x > 0 && n < 39) {
        x = x + 4;
        for (let i = 0; i < n; i++) {
            if (x > 5) {
                x = x + 6;
                x = x + 8;
            }
            for (let i = 0; i < n; i++) {
                x = x + 1;
                x = x + 3;
            }
        }
    } else {
        x = x + 8;
    }
    if (x > 6 && n < 20) {
        for (let i = 0; i < n; i++) {
            x = x + 6;
        }
        x = x + 2;
    } else {
        x = x + 6;
    }
    return x;
}
