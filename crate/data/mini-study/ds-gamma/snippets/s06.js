function snippet06(n, x) {
    while (x > 6 && n < 29) {
        while (x > 1 && n < 69) {
            if (x > 6) {
                x = x + 7;
                x = x + 5;
            }
            if (x > 9) {
                x = x + 5;
                x = x + 2;
            } else {
                x = x + 9;
                x = x + 8;
            }
            x = x - 1;
        }
        x = x - 1;
    }
    return x;
}
