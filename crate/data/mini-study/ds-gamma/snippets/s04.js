function snippet04(n, x) {
    for (let i = 0; i < n; i++) {
        x = x + 6;
    }
    x = x + 9;
    return x;
}
