function kind(token) {
  switch (typeof token) {                       // +1 switch
    case "number":
    case "bigint":
      return "num";
    case "string":
      return token.length ? "str" : "empty";    // +2 ternary (nesting 1)
    default:
      return "other";
  }
}
