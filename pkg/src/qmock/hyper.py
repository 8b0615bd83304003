"""Unilateral phi and bilateral 2psi2 basic hypergeometric series.

Parameters may be the :data:`INF` marker, meaning the formal limit of a
parameter tending to infinity together with a compensating rescaling of the
argument.  For a numerator parameter a -> oo the argument is understood as
z/a, and the pair contributes (-1)^n q^{n(n-1)/2} z^n for every integer n.
For a denominator parameter b -> oo the argument is understood as z*b and the
pair contributes (-1)^n q^{-n(n-1)/2} z^n.  No large finite stand-in is ever
substituted.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import AnnulusViolation, PreconditionError
from .qcore import DEFAULT_POLICY, QBase, TruncationPolicy, base_value, hp
from .results import SeriesResult
from .series import Factor, Geometric, Poch, QPower, sum_bilateral, sum_unilateral

HALF = Fraction(1, 2)


class _Infinite:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinite, ())


INF = _Infinite()


def is_inf(x) -> bool:
    return x is INF


def _param(x):
    return INF if is_inf(x) else hp(x)


@dataclass(frozen=True)
class PhiSpec:
    """A-phi-(A-1) with numerators ``numerators``, denominators ``denominators``."""

    numerators: Sequence
    denominators: Sequence
    base: object
    z: object

    def __post_init__(self):
        object.__setattr__(self, "numerators", tuple(_param(a) for a in self.numerators))
        object.__setattr__(self, "denominators", tuple(_param(b) for b in self.denominators))
        object.__setattr__(self, "z", hp(self.z))


@dataclass(frozen=True)
class Psi2Spec:
    a1: object
    a2: object
    b1: object
    b2: object
    base: object
    z: object

    def __post_init__(self):
        for name in ("a1", "a2", "b1", "b2"):
            object.__setattr__(self, name, _param(getattr(self, name)))
        object.__setattr__(self, "z", hp(self.z))

    @property
    def numerators(self):
        return (self.a1, self.a2)

    @property
    def denominators(self):
        return (self.b1, self.b2)


def _limit_factors(q, sign_exp):
    # (-1)^n q^{sign_exp * n(n-1)/2}
    return [Geometric(-1), QPower(q, sign_exp * HALF, -sign_exp * HALF)]


def term_factors(numerators, denominators, q, z, with_q_factorial: bool) -> list[Factor]:
    """Factors of the n-th term of a phi/psi series with the INF convention."""
    fs: list[Factor] = []
    for a in numerators:
        if is_inf(a):
            fs.extend(_limit_factors(q, 1))
        elif a != 0:
            fs.append(Poch(a, q))
    for b in denominators:
        if is_inf(b):
            fs.extend(_limit_factors(q, -1))
        elif b != 0:
            fs.append(Poch(b, q, power=-1))
    if with_q_factorial:
        fs.append(Poch(q, q, power=-1))
    fs.append(Geometric(z))
    return fs


def convergence_radii(numerators, denominators, q):
    """(inner, outer) radii in |z| between which a bilateral series converges.

    For n -> +oo the term ratio tends to z times q^{n(#INF numerators -
    #INF denominators)}; for n -> -oo finite nonzero parameters contribute
    powers of q^n and their product sets the inner radius.
    """
    inf_a = sum(1 for a in numerators if is_inf(a))
    inf_b = sum(1 for b in denominators if is_inf(b))
    e = inf_a - inf_b
    outer = mpmath.inf if e > 0 else (mpmath.mpf(1) if e == 0 else mpmath.mpf(0))

    fin_a = [a for a in numerators if not is_inf(a) and a != 0]
    fin_b = [b for b in denominators if not is_inf(b) and b != 0]
    s = len(fin_b) + inf_b - len(fin_a) - inf_a
    if s < 0:
        inner = mpmath.mpf(0)
    elif s > 0:
        inner = mpmath.inf
    else:
        num = mpmath.mpf(1)
        for b in fin_b:
            num *= b
        den = mpmath.mpf(1)
        for a in fin_a:
            den *= a
        inner = abs(num / den)
    return inner, outer


def phi_eval(spec: PhiSpec, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """sum_{n>=0} prod (a_i;q)_n z^n / [prod (b_j;q)_n (q;q)_n]."""
    q = base_value(spec.base)
    if len(spec.denominators) != len(spec.numerators) - 1:
        raise PreconditionError("an A-phi-(A-1) series needs one fewer denominator than numerators")
    _, outer = convergence_radii(spec.numerators, spec.denominators, q)
    if not abs(spec.z) < outer:
        raise AnnulusViolation(f"|z| = {mpmath.nstr(abs(spec.z), 8)} outside the disc |z| < {mpmath.nstr(outer, 8)}")
    if spec.z == 0:
        return SeriesResult(mpmath.mpf(1), 1)
    return sum_unilateral(term_factors(spec.numerators, spec.denominators, q, spec.z, True), policy)


def psi2_annulus(spec: Psi2Spec):
    return convergence_radii(spec.numerators, spec.denominators, base_value(spec.base))


def psi2_eval(spec: Psi2Spec, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """sum over n in Z of (a1;q)_n (a2;q)_n z^n / [(b1;q)_n (b2;q)_n]."""
    q = base_value(spec.base)
    inner, outer = psi2_annulus(spec)
    mag = abs(spec.z)
    if not (inner < mag < outer):
        raise AnnulusViolation(
            f"|z| = {mpmath.nstr(mag, 8)} outside the annulus "
            f"{mpmath.nstr(inner, 8)} < |z| < {mpmath.nstr(outer, 8)}"
        )
    return sum_bilateral(term_factors(spec.numerators, spec.denominators, q, spec.z, False), policy)
