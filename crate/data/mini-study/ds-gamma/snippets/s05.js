function snippet05(n, x) {
    x = x + 3;
    return x;
}
