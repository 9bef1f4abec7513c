function snippet11(n, x) {
    x = x + 6;
    x = x + 6;
    return x;
}
