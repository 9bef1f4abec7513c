class NestedIf {
    Runnable check(int a) {
        return () -> {
            if (a > 0) {                     // +2 if (nesting 1, lambda)
                System.out.println("positive");
            } else {                         // +1 else
                System.out.println("other");
            }
        };
    }
}
