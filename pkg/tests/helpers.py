import mpmath


def rel(x, y):
    """Relative difference with the same floor the records use."""
    x, y = mpmath.mpmathify(x), mpmath.mpmathify(y)
    return abs(x - y) / max(abs(x), abs(y), mpmath.mpf("1e-30"))


def brute_sum(term, lo, hi):
    """sum_{n=lo}^{hi} term(n), straight from the definition."""
    return mpmath.fsum(term(n) for n in range(lo, hi + 1))
