function snippet10(n, x) {
    x = x + 5;
    return x;
}
