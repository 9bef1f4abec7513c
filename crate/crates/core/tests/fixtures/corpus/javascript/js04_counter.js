class Counter {
  constructor(start) {
    this.n = start || 0;        // +1 ||
  }

  step(by) {
    this.n += by ?? 1;          // null-coalescing: nothing
    return this.n;
  }

  reset() {
    this.n = 0;
  }
}
