"""High-precision scalars and q-Pochhammer symbols.

Every value in the package is an :mod:`mpmath` number evaluated at the
working precision of the ambient ``mpmath.mp`` context.  Use
:func:`precision` to pin it for a block of work.

The finite symbol is extended to negative indices by

    (a; q)_{-n} = 1 / (a q^{-n}; q)_n,

the only extension compatible with (a; q)_{n+1} = (a; q)_n (1 - a q^n).
"""
from __future__ import annotations

import contextlib
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
from mpmath import mp

from .errors import NearPoleWarning, NonConvergence, PoleError, PreconditionError
from .results import SeriesResult, Status

DEFAULT_PRECISION = 50
MIN_PRECISION = 30
NEAR_POLE_THRESHOLD = mpmath.mpf("1e-20")


@contextlib.contextmanager
def precision(dps: int = DEFAULT_PRECISION):
    """Evaluate the enclosed block at ``dps`` decimal digits."""
    if dps < MIN_PRECISION:
        raise PreconditionError(f"precision must be at least {MIN_PRECISION} digits, got {dps}")
    with mp.workdps(dps):
        yield


_COMPLEX_RE = re.compile(
    r"^\s*(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?"
    r"(?:(?P<im>[+-]\s*(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij])?\s*$"
)


def hp(x):
    """Convert ``x`` to an mpmath number at the current precision.

    Strings are parsed as decimal literals, optionally complex in the form
    ``re+imi`` (``j`` is accepted as well).  Real inputs become ``mpf``.
    """
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return +x
    if isinstance(x, str):
        return parse_hp(x)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, complex):
        return mpmath.mpc(x) if x.imag else mpmath.mpf(x.real)
    return mpmath.mpf(x)


def parse_hp(text: str):
    s = text.strip().replace(" ", "")
    try:
        return mpmath.mpf(s)
    except (ValueError, TypeError):
        pass
    if s[-1:] in ("i", "j"):
        try:
            return mpmath.mpc(0, mpmath.mpf(s[:-1]))
        except (ValueError, TypeError):
            pass
    m = _COMPLEX_RE.match(s)
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"not a number: {text!r}")
    re_part = mpmath.mpf(m.group("re") or 0)
    im_txt = m.group("im")
    if im_txt is None:
        return re_part
    if im_txt in ("+", "-"):
        im_txt += "1"
    im_part = mpmath.mpf(im_txt)
    if im_part == 0:
        return re_part
    return mpmath.mpc(re_part, im_part)


def format_hp(x, digits: int | None = None) -> str:
    """Decimal text for ``x``; complex values as ``re+imi``."""
    digits = digits or mp.dps
    if isinstance(x, mpmath.mpc) and x.imag != 0:
        re_s = _fmt_real(x.real, digits)
        im_s = _fmt_real(x.imag, digits)
        sign = "" if im_s.startswith("-") else "+"
        return f"{re_s}{sign}{im_s}i"
    if isinstance(x, mpmath.mpc):
        x = x.real
    return _fmt_real(mpmath.mpf(x), digits)


def _fmt_real(x, digits: int) -> str:
    if mpmath.isnan(x):
        return "nan"
    if mpmath.isinf(x):
        return "inf" if x > 0 else "-inf"
    return mpmath.nstr(x, digits)


def is_zero(x) -> bool:
    return x == 0


def qpow(q, exponent):
    """Principal-branch power q**exponent.

    Integral exponents use exact repeated multiplication semantics of mpmath;
    anything else goes through exp(exponent * log q).
    """
    e = as_exponent(exponent)
    if isinstance(e, int):
        return q**e
    return mpmath.exp(hp(e) * mpmath.log(q))


def as_exponent(x):
    """Normalize an exponent: integral values become ``int``."""
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, (mpmath.mpf, float)) and mpmath.isint(x):
        return int(x)
    return x


@dataclass(frozen=True)
class QBase:
    """The base q**step of a Pochhammer symbol (a; q^step)_n."""

    q: object
    step: int = 1

    def __post_init__(self):
        if self.step < 1:
            raise PreconditionError(f"step must be a positive integer, got {self.step}")
        mag = abs(hp(self.q))
        if not (0 < mag < 1):
            raise PreconditionError(f"need 0 < |q| < 1, got |q| = {mpmath.nstr(mag, 8)}")

    @property
    def value(self):
        return hp(self.q) ** self.step


def base_value(base) -> object:
    """Accept a QBase or a bare number and return the effective base."""
    if isinstance(base, QBase):
        return base.value
    q = hp(base)
    if not (0 < abs(q) < 1):
        raise PreconditionError(f"need 0 < |q| < 1, got q = {mpmath.nstr(q, 8)}")
    return q


@dataclass(frozen=True)
class TruncationPolicy:
    """How infinite sums and products are cut off.

    A sum stops once ``consecutive_small`` successive terms are below
    ``tail_tol`` relative to the running partial sum.  Reaching ``max_terms``
    leaves the result ``Truncated``.
    """

    max_terms: int = 500
    tail_tol: float = 1e-40
    consecutive_small: int = 2

    def __post_init__(self):
        if self.max_terms < 1 or self.consecutive_small < 1:
            raise PreconditionError("max_terms and consecutive_small must be positive")
        if not self.tail_tol > 0:
            raise PreconditionError("tail_tol must be positive")

    @property
    def tol(self):
        return mpmath.mpf(self.tail_tol)


DEFAULT_POLICY = TruncationPolicy()


def _check_divisor(x, what):
    if x == 0:
        raise PoleError(f"zero factor {what}", factor=what)
    if abs(x) < NEAR_POLE_THRESHOLD:
        warnings.warn(f"near-pole factor {what}: |{mpmath.nstr(x, 5)}|", NearPoleWarning, stacklevel=3)


def qpoch_finite(a, base, n: int):
    """(a; q)_n for any integer n.

    Raises PoleError when n < 0 and one of the factors (1 - a q^{-m}),
    1 <= m <= |n|, is exactly zero.
    """
    a = hp(a)
    q = base_value(base)
    n = int(n)
    if n >= 0:
        r = mpmath.mpf(1)
        x = a
        for _ in range(n):
            r *= 1 - x
            x *= q
        return r
    r = mpmath.mpf(1)
    for m in range(1, -n + 1):
        f = _one_minus(a, q, -m)
        _check_divisor(f, f"1 - a*q^-{m}")
        r *= f
    return 1 / r


def _one_minus(a, q, e: int):
    """1 - a q^e; for e < 0 written as (q^-e - a)/q^-e so that a = q^-e gives an exact zero."""
    if e >= 0:
        return 1 - a * q**e
    p = q ** (-e)
    return (p - a) / p


def qpoch_reciprocal(a, base, n: int):
    """1 / (a; q)_n, with the convention that 1/(a;q)_n = 0 when (a;q)_n is infinite.

    For n < 0 this is the finite product (a q^n; q)_{|n|} and never raises.
    For n >= 0 a zero factor is a genuine pole and raises PoleError.
    """
    a = hp(a)
    q = base_value(base)
    n = int(n)
    if n < 0:
        r = mpmath.mpf(1)
        for e in range(n, 0):
            r *= _one_minus(a, q, e)
        return r
    r = mpmath.mpf(1)
    x = a
    for m in range(n):
        f = 1 - x
        _check_divisor(f, f"1 - a*q^{m}")
        r *= f
        x *= q
    return 1 / r


def multi_qpoch(factors: Sequence, base, n: int):
    """(a_1, ..., a_m; q)_n as the product of single symbols."""
    r = mpmath.mpf(1)
    for i, a in enumerate(factors):
        try:
            r *= qpoch_finite(a, base, n)
        except PoleError as exc:
            raise PoleError(f"factor #{i} ({mpmath.nstr(hp(a), 10)}): {exc}", factor=i) from exc
    return r


def qpoch_infinite(a, base, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """(a; q)_inf by partial products.

    Stops after ``consecutive_small`` factors with |a q^m| < tail_tol.  The
    reported tail bounds |prod_{j>=m}(1 - x_j) - 1| by |x_m| / (1 - |q|),
    which is the leading term of exp(sum |x_j|) - 1.
    """
    a = hp(a)
    q = base_value(base)
    if a == 0:
        return SeriesResult(mpmath.mpf(1), 0, mpmath.mpf(0), Status.CONVERGED)
    tol = policy.tol
    qa = abs(q)
    r = mpmath.mpf(1)
    x = a
    small = 0
    for m in range(policy.max_terms):
        r *= 1 - x
        if r == 0:
            return SeriesResult(r, m + 1, mpmath.mpf(0), Status.CONVERGED)
        x *= q
        if abs(x) < tol:
            small += 1
            if small >= policy.consecutive_small:
                return SeriesResult(r, m + 1, abs(x) / (1 - qa), Status.CONVERGED)
        else:
            small = 0
    raise NonConvergence(f"(a;q)_inf did not reach tail {policy.tail_tol} in {policy.max_terms} factors")


def infinite_product(args: Iterable, base, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """(a_1, ..., a_m; q)_inf."""
    out = SeriesResult(mpmath.mpf(1))
    for a in args:
        out = out * qpoch_infinite(a, base, policy)
    return out


def product_ratio(num: Sequence, den: Sequence, base, policy: TruncationPolicy = DEFAULT_POLICY,
                  names: Sequence[str] | None = None) -> SeriesResult:
    """(num...; q)_inf / (den...; q)_inf, naming the offending entry on a zero denominator."""
    top = infinite_product(num, base, policy)
    bottom = SeriesResult(mpmath.mpf(1))
    for i, d in enumerate(den):
        f = qpoch_infinite(d, base, policy)
        if f.value == 0:
            label = names[i] if names else f"#{i}"
            raise PoleError(f"infinite product ({label}; q)_inf vanishes in a denominator "
                            f"(argument {mpmath.nstr(hp(d), 12)})", factor=label)
        bottom = bottom * f
    return top / bottom
