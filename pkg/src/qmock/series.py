"""Term-ratio summation engine for unilateral and bilateral q-series.

A series term is described as a product of :class:`Factor` objects.  Each
factor can report its own value at any index (used for the n = 0 term and by
independent checks) and its contribution to the ratio between neighbouring
terms, as a ``(numerator, denominator)`` pair.  Keeping the two halves apart
lets the engine tell a genuine pole (zero denominator) from a structural zero
(zero numerator, e.g. 1/(q;q)_n at negative n), which terminates a side of
the sum instead of failing it.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import PoleError
from .qcore import DEFAULT_POLICY, TruncationPolicy, as_exponent, hp, qpoch_finite, qpoch_reciprocal, qpow
from .results import SeriesResult, Status

RATIO_CLAMP = mpmath.mpf("0.9")
ONE = mpmath.mpf(1)


class Factor:
    """One multiplicative piece of a series term."""

    def at(self, n: int):
        raise NotImplementedError

    def up(self, n: int):
        """(num, den) with term(n+1)/term(n) = num/den for this factor."""
        raise NotImplementedError

    def down(self, n: int):
        """(num, den) with term(n-1)/term(n) = num/den for this factor."""
        raise NotImplementedError


class Poch(Factor):
    """(a; base)_{k n + offset} raised to ``power`` (+1 or -1)."""

    def __init__(self, a, base, k: int = 1, offset: int = 0, power: int = 1):
        if power not in (1, -1):
            raise ValueError("power must be +1 or -1")
        self.a = hp(a)
        self.base = hp(base)
        self.k = k
        self.offset = offset
        self.power = power

    def __repr__(self):
        return f"Poch({mpmath.nstr(self.a, 8)}, {mpmath.nstr(self.base, 8)}, k={self.k}, off={self.offset}, pow={self.power})"

    def at(self, n):
        m = self.k * n + self.offset
        if self.power == 1:
            return qpoch_finite(self.a, self.base, m)
        return qpoch_reciprocal(self.a, self.base, m)

    def _block(self, start, count):
        # prod_{j=0}^{count-1} (1 - a base^{start+j})
        x = self.a * self.base**start
        r = ONE
        for _ in range(count):
            r *= 1 - x
            x *= self.base
        return r

    def up(self, n):
        blk = self._block(self.k * n + self.offset, self.k)
        return (blk, ONE) if self.power == 1 else (ONE, blk)

    def down(self, n):
        blk = self._block(self.k * n + self.offset - self.k, self.k)
        return (ONE, blk) if self.power == 1 else (blk, ONE)


class Geometric(Factor):
    """x**n."""

    def __init__(self, x):
        self.x = hp(x)

    def __repr__(self):
        return f"Geometric({mpmath.nstr(self.x, 8)})"

    def at(self, n):
        if n < 0 and self.x == 0:
            raise PoleError("0**n with n < 0", factor="geometric")
        return self.x**n

    def up(self, n):
        return self.x, ONE

    def down(self, n):
        return ONE, self.x


class QPower(Factor):
    """q**(A n^2 + B n) on the principal branch; A and B may be non-integral."""

    def __init__(self, q, quad, lin):
        self.q = hp(q)
        self.quad = _exp(quad)
        self.lin = _exp(lin)

    def __repr__(self):
        return f"QPower({mpmath.nstr(self.q, 8)}, {self.quad}, {self.lin})"

    def at(self, n):
        return qpow(self.q, as_exponent(self.quad * n * n + self.lin * n))

    def up(self, n):
        return qpow(self.q, as_exponent(self.quad * (2 * n + 1) + self.lin)), ONE

    def down(self, n):
        return qpow(self.q, as_exponent(self.quad * (1 - 2 * n) - self.lin)), ONE


def _exp(x):
    if isinstance(x, (int, Fraction)):
        return x
    e = as_exponent(x)
    return e if isinstance(e, int) else hp(e)


def sign_alternating() -> Geometric:
    return Geometric(-1)


def term_at(factors: Sequence[Factor], n: int):
    """Direct (non-incremental) value of the term at index n."""
    t = ONE
    for f in factors:
        t *= f.at(n)
    return t


def _ratio(factors, n, direction):
    num = ONE
    den = ONE
    for f in factors:
        a, b = f.up(n) if direction > 0 else f.down(n)
        num *= a
        den *= b
    return num, den


def sum_side(factors: Sequence[Factor], policy: TruncationPolicy = DEFAULT_POLICY,
             direction: int = 1) -> SeriesResult:
    """Sum term(n) for n = 0, 1, 2, ... (direction=+1) or n = -1, -2, ... (direction=-1).

    The first term of each side is evaluated directly; later terms are
    obtained from the factor ratios.  A zero term ends the side: on the
    forward side zeros come from numerator symbols (a;q)_n with a = q^-k, on
    the backward side from reciprocal symbols 1/(b;q)_n, and in both cases
    every later term carries the same zero factor.
    """
    tol = policy.tol
    n = 0 if direction > 0 else -1
    t = term_at(factors, n)
    total = t
    used = 1
    small = 0
    prev_mag = abs(t)
    last_ratio = None
    scale = max(abs(total), tol)
    if prev_mag <= tol * scale:
        small = 1
    for _ in range(policy.max_terms - 1):
        if t == 0:
            return SeriesResult(total, used, mpmath.mpf(0), Status.CONVERGED)
        if small >= policy.consecutive_small:
            break
        num, den = _ratio(factors, n, direction)
        if den == 0:
            raise PoleError(f"term ratio has a zero denominator between n={n} and n={n + direction}",
                            factor=f"index {n + direction}")
        t = t * num / den
        n += direction
        total += t
        used += 1
        mag = abs(t)
        if prev_mag:
            last_ratio = mag / prev_mag
        prev_mag = mag
        scale = max(abs(total), tol)
        if mag <= tol * scale:
            small += 1
        else:
            small = 0
    if t == 0:
        return SeriesResult(total, used, mpmath.mpf(0), Status.CONVERGED)
    scale = max(abs(total), tol)
    if small >= policy.consecutive_small:
        return _finish(total, used, prev_mag, last_ratio, scale)
    return SeriesResult(total, used, abs(t) / scale, Status.TRUNCATED)


def _finish(total, used, mag, ratio, scale):
    if mag == 0:
        return SeriesResult(total, used, mpmath.mpf(0), Status.CONVERGED)
    if ratio is None or ratio >= RATIO_CLAMP:
        return SeriesResult(total, used, mag / scale, Status.TRUNCATED)
    tail = mag * ratio / (1 - ratio) / scale
    return SeriesResult(total, used, tail, Status.CONVERGED)


def sum_unilateral(factors: Sequence[Factor], policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """sum_{n >= 0} term(n)."""
    return sum_side(factors, policy, 1)


def sum_bilateral(factors: Sequence[Factor], policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """sum over all integers n, as (n >= 0) + (n <= -1), each side under ``policy``."""
    pos = sum_side(factors, policy, 1)
    neg = sum_side(factors, policy, -1)
    value = pos.value + neg.value
    scale = max(abs(value), policy.tol)
    tail = (pos.tail_estimate * max(abs(pos.value), policy.tol)
            + neg.tail_estimate * max(abs(neg.value), policy.tol)) / scale
    return SeriesResult(value, pos.terms_used + neg.terms_used, tail,
                        Status.worst(pos.status, neg.status), positive=pos, negative=neg)
