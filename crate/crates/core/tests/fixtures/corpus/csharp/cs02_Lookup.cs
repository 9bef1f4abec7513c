public class Lookup
{
    public string Name(string? given, string fallback)
    {
        var n = given ?? fallback;              // null-coalescing: nothing
        return n.Length > 0 ? n : "anon";       // +1 ternary
    }

    public bool Valid(int? x)
    {
        return x.HasValue && x.Value > 0;       // +1 &&
    }
}
