function firstPair(a, b, target) {
  outer: for (let i = 0; i < a.length; i++) {   // +1 for
    for (let j = 0; j < b.length; j++) {        // +2 for (nesting 1)
      if (a[i] + b[j] === target) {             // +3 if (nesting 2)
        console.log(i, j);
        break outer;                            // +1 labeled break
      }
    }
  }
}
