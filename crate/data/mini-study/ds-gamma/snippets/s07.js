function snippet07(n, x) {
    if (x > 0) {
        for (let i = 0; i < n; i++) {
            if (x > 8 && n < 19) {
                x = x + 8;
                x = x + 9;
            } else {
                x = x + 8;
            }
            x = x + 3;
        }
        x = x + 8;
    } else {
        if (x > 7 && n < 62) {
            for (let i = 0; i < n; i++) {
                x = x + 4;
            }
            x = x + 6;
        }
        if (x > 2 && n < 36) {
            while (x > 2 && n < 46) {
                x = x + 1;
                x = x + 5;
                x = x - 1;
            }
            x = x + 9;
        }
    }
    if (x > 8 && n < 35) {
        for (let i = 0; i < n; i++) {
            if (x > 2) {
                x = x + 5;
                x = x + 3;
            }
            x = x + 1;
        }
    } else {
        if (x > 9) {
            if (x > 2) {
                x = x + 2;
            } else {
                x = x + 4;
            }
            x = x + 2;
        }
        if (x > 4) {
            x = x + 4;
        }
    }
    return x;
}
