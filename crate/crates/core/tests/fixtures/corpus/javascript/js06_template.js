function describe(user) {
  const label = `${user.name} (${user.admin ? "admin" : "user"})`;    // +1 ternary
  return label + " while if for";
}

function walk(node) {
  if (!node) return 0;              // +1 if
  return 1 + walk(node.next);       // +1 recursion
}
