function snippet13(n, x) {
    if (x > 7) {
        x = x + 6;
    } else {
        x = x + 4;
    }
    return x;
}
