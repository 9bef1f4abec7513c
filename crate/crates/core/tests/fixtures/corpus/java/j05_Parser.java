class Parser {
    int parse(String[] parts) {
        int sum = 0;
        outer:
        for (String p : parts) {                    // +1 foreach
            try {
                int v = Integer.parseInt(p);
                switch (v) {                        // +2 switch (nesting 1)
                    case 0:
                        continue outer;             // +1 labeled continue
                    case 1:
                        sum += 1;
                        break;
                    default:
                        sum += v;
                }
            } catch (NumberFormatException e) {     // +2 catch (nesting 1)
                break;
            }
        }
        return sum;
    }
}
