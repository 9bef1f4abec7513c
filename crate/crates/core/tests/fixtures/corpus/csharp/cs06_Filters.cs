using System.Linq;
using System.Collections.Generic;

public class Filters
{
    public IEnumerable<int> Big(List<int> xs, int t)
    {
        return xs.Where(x => x > t || x < -t);      // +1 ||
    }

    public int Count(List<int> xs)
    {
        int c = 0;
        xs.ForEach(x =>
        {
            if (x % 2 == 0)         // +2 if (nesting 1, lambda)
            {
                c++;
            }
        });
        return c;
    }
}
