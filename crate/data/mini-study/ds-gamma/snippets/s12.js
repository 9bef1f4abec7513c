function snippet12(n, x) {
    for (let i = 0; i < n; i++) {
        if (x > 9 && n < 85) {
            while (x > 2 && n < 27) {
                x = x + 1;
                x = x - 1;
            }
        } else {
            x = x + 9;
            x = x + 2;
        }
        while (x > 7 && n < 66) {
            x = x + 5;
            x = x + 6;
            x = x - 1;
        }
    }
    if (x > 5 && n < 43) {
        if (x > 9 && n < 70) {
            x = x + 9;
            x = x + 9;
        }
    }
    return x;
}
