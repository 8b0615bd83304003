"""The six new mock theta functions: classical, generalized and complete forms.

Classical (single variable q)::

    psi0(q) = sum q^{2n^2} / (-q;q)_{2n}
    psi1(q) = sum q^{2n^2+2n} / (-q;q)_{2n+1}
    psi2(q) = sum q^{2n^2+2n} (q;q^2)_n / [(q^2;q^2)_n (-q;q)_{2n}]
    psi3(q) = sum q^{n^2} (-q;q)_n^2 / (q;q)_{2n}
    phi0(q) = sum q^n (-q;q)_{2n+1}
    phi1(q) = sum q^n (-q;q)_{2n}

Generalized forms carry (t, alpha, z) and a 1/(t;q)_inf normalization; the
complete forms extend the same summands to all integers n.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields, replace
from typing import Optional

import mpmath

from .errors import PoleError, PreconditionError, UsageError
from .qcore import DEFAULT_POLICY, TruncationPolicy, format_hp, hp, qpoch_infinite
from .results import SeriesResult, Status
from .series import Factor, Geometric, Poch, QPower, sum_bilateral, sum_side, sum_unilateral


class Family(enum.Enum):
    PSI0 = "psi0"
    PSI1 = "psi1"
    PSI2 = "psi2"
    PSI3 = "psi3"
    PHI0 = "phi0"
    PHI1 = "phi1"

    @classmethod
    def parse(cls, name) -> "Family":
        if isinstance(name, Family):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise UsageError(f"unknown function family {name!r}; expected one of "
                             f"{', '.join(f.value for f in cls)}") from None


class Variant(enum.Enum):
    CLASSICAL = "classical"
    GENERALIZED = "generalized"
    COMPLETE = "complete"

    @classmethod
    def parse(cls, name) -> "Variant":
        if isinstance(name, Variant):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise UsageError(f"unknown variant {name!r}; expected classical, generalized or complete") from None


@dataclass(frozen=True)
class FunctionId:
    family: Family
    variant: Variant


class Psi3Denominator(enum.Enum):
    """Which (.;q)_{2n} divides the classical psi3 summand."""

    PRINTED = "printed"          # (q;q)_{2n}
    GENERALIZED = "generalized"  # (-q;q)_{2n}, what the generalized form reduces to


_POINT_KEYS = ("q", "z", "t", "alpha", "c1", "c2", "a1", "a2", "b1", "b2", "lam", "beta")


@dataclass(frozen=True)
class ParameterPoint:
    """One assignment of the parameters used across the package.

    ``a1, a2, b1, b2`` feed the general transformations, ``lam, beta`` the
    continued fraction; both groups are optional.
    """

    q: object
    z: object = 0
    t: object = 0
    alpha: object = 0
    c1: object = None
    c2: object = None
    a1: object = None
    a2: object = None
    b1: object = None
    b2: object = None
    lam: object = None
    beta: object = None

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None:
                object.__setattr__(self, f.name, hp(v))
        if isinstance(self.alpha, mpmath.mpc):
            if self.alpha.imag != 0:
                raise PreconditionError("alpha must be real")
            object.__setattr__(self, "alpha", self.alpha.real)

    def validate(self):
        """Raise PreconditionError unless 0 < |q| < 1 and t avoids q^{-m}."""
        if not (0 < abs(self.q) < 1):
            raise PreconditionError(f"need 0 < |q| < 1, got q = {format_hp(self.q, 12)}")
        t = self.t
        if t != 0:
            # t = q^{-m} with m >= 0 makes (t;q)_inf vanish
            m = int(mpmath.nint(-mpmath.log(abs(t)) / mpmath.log(abs(self.q))))
            if m >= 0 and abs(t * self.q**m - 1) <= mpmath.mpf(10) ** (5 - mpmath.mp.dps):
                raise PreconditionError(f"t = q^-{m} makes (t;q)_inf vanish")
        return self

    def with_(self, **changes) -> "ParameterPoint":
        return replace(self, **changes)

    def swapped(self, x: str, y: str) -> "ParameterPoint":
        return replace(self, **{x: getattr(self, y), y: getattr(self, x)})

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in _POINT_KEYS if getattr(self, k) is not None}

    def to_line(self, digits: int | None = None) -> str:
        return " ".join(f"{k}={format_hp(v, digits)}" for k, v in self.as_dict().items())

    @classmethod
    def from_line(cls, line: str) -> "ParameterPoint":
        kv = {}
        for tok in line.split():
            if "=" not in tok:
                raise UsageError(f"malformed point token {tok!r} (expected key=value)")
            k, v = tok.split("=", 1)
            if k not in _POINT_KEYS:
                raise UsageError(f"unknown point key {k!r}")
            try:
                kv[k] = hp(v)
            except ValueError as exc:
                raise UsageError(f"bad value for {k}: {exc}") from None
        if "q" not in kv:
            raise UsageError("point line is missing q")
        return cls(**kv)


# ---------------------------------------------------------------------------
# summand factor lists

def classical_factors(family: Family, q, psi3_denominator=Psi3Denominator.PRINTED) -> list[Factor]:
    q = hp(q)
    mq = -q
    if family is Family.PSI0:
        return [QPower(q, 2, 0), Poch(mq, q, k=2, power=-1)]
    if family is Family.PSI1:
        return [QPower(q, 2, 2), Poch(mq, q, k=2, offset=1, power=-1)]
    if family is Family.PSI2:
        q2 = q * q
        return [QPower(q, 2, 2), Poch(q, q2), Poch(q2, q2, power=-1), Poch(mq, q, k=2, power=-1)]
    if family is Family.PSI3:
        den = q if Psi3Denominator(psi3_denominator) is Psi3Denominator.PRINTED else mq
        return [QPower(q, 1, 0), Poch(mq, q), Poch(mq, q), Poch(den, q, k=2, power=-1)]
    if family is Family.PHI0:
        return [Geometric(q), Poch(mq, q, k=2, offset=1)]
    if family is Family.PHI1:
        return [Geometric(q), Poch(mq, q, k=2)]
    raise UsageError(f"unknown family {family!r}")


def generalized_factors(family: Family, p: ParameterPoint) -> list[Factor]:
    """Summand of the generalized series without the 1/(t;q)_inf normalization."""
    q, z, t, al = p.q, p.z, p.t, p.alpha
    z2 = z * z
    w = -z2 / q  # the -z^2/q Pochhammer argument shared by all six
    fs: list[Factor] = [Geometric(z2)]
    if t != 0:
        fs.append(Poch(t, q))
    if family is Family.PSI0:
        fs += [QPower(q, 2, al - 3), Poch(w, q, k=2, power=-1)]
    elif family is Family.PSI1:
        fs += [QPower(q, 2, al - 1), Poch(w, q, k=2, offset=1, power=-1)]
    elif family is Family.PSI2:
        q2 = q * q
        fs += [QPower(q, 2, 2 - 2 * al), Poch(z, q2), Poch(z2, q2, power=-1), Poch(w, q, k=2, power=-1)]
    elif family is Family.PSI3:
        fs += [QPower(q, 1, al - 1), Poch(-z, q), Poch(-z, q), Poch(w, q, k=2, power=-1)]
    elif family is Family.PHI0:
        fs += [QPower(q, 0, 1 - 2 * al), Poch(w, q, k=2, offset=1)]
    elif family is Family.PHI1:
        fs += [QPower(q, 0, 1 - 2 * al), Poch(w, q, k=2)]
    else:
        raise UsageError(f"unknown family {family!r}")
    return fs


def _normalization(p: ParameterPoint, policy) -> SeriesResult:
    if p.t == 0:
        return SeriesResult(mpmath.mpf(1))
    tinf = qpoch_infinite(p.t, p.q, policy)
    if tinf.value == 0:
        raise PoleError("(t;q)_inf vanishes", factor="t")
    return 1 / tinf


def _check_q(q):
    if not (0 < abs(q) < 1):
        raise PreconditionError(f"need 0 < |q| < 1, got q = {format_hp(q, 12)}")


# ---------------------------------------------------------------------------
# evaluators

def eval_classical(family, q, policy: TruncationPolicy = DEFAULT_POLICY,
                   psi3_denominator=Psi3Denominator.PRINTED) -> SeriesResult:
    family = Family.parse(family)
    q = hp(q)
    _check_q(q)
    return sum_unilateral(classical_factors(family, q, psi3_denominator), policy)


def eval_generalized(family, p: ParameterPoint, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    family = Family.parse(family)
    p.validate()
    norm = _normalization(p, policy)
    return norm * sum_unilateral(generalized_factors(family, p), policy)


def eval_complete(family, p: ParameterPoint, policy: TruncationPolicy = DEFAULT_POLICY,
                  sides: str = "both") -> SeriesResult:
    """Bilateral sum over all n, normalized by 1/(t;q)_inf as a whole.

    ``sides`` may be "both", "nonnegative" or "negative" to restrict the sum.
    The returned result exposes the normalized ``positive`` and ``negative``
    halves when both are summed.
    """
    family = Family.parse(family)
    p.validate()
    norm = _normalization(p, policy)
    fs = generalized_factors(family, p)
    if sides == "nonnegative":
        return norm * sum_side(fs, policy, 1)
    if sides == "negative":
        return norm * sum_side(fs, policy, -1)
    if sides != "both":
        raise UsageError(f"sides must be both, nonnegative or negative, not {sides!r}")
    res = sum_bilateral(fs, policy)
    pos = norm * res.positive
    neg = norm * res.negative
    total = norm * res
    return SeriesResult(total.value, total.terms_used, total.tail_estimate, total.status,
                        positive=pos, negative=neg)


def evaluate(function: FunctionId, p: ParameterPoint, policy: TruncationPolicy = DEFAULT_POLICY,
             psi3_denominator=Psi3Denominator.PRINTED) -> SeriesResult:
    if function.variant is Variant.CLASSICAL:
        return eval_classical(function.family, p.q, policy, psi3_denominator)
    if function.variant is Variant.GENERALIZED:
        return eval_generalized(function.family, p, policy)
    return eval_complete(function.family, p, policy)


def psi3_reduction_report(q, policy: TruncationPolicy = DEFAULT_POLICY) -> dict:
    """Compare both classical psi3 denominators with the generalized form at t=0, alpha=-1, z=q.

    That point turns the generalized exponent into n^2 and (-z;q)_n^2 into
    (-q;q)_n^2, so only the (.;q)_{2n} denominator can disagree.
    """
    q = hp(q)
    gen = eval_generalized(Family.PSI3, ParameterPoint(q=q, z=q, t=0, alpha=-1), policy)
    out = {"q": q, "generalized": gen.value, "variants": {}}
    best = None
    for den in Psi3Denominator:
        val = eval_classical(Family.PSI3, q, policy, den).value
        rel = abs(val - gen.value) / max(abs(gen.value), mpmath.mpf(10) ** -30)
        out["variants"][den.value] = {"value": val, "rel_residual": rel}
        if best is None or rel < out["variants"][best]["rel_residual"]:
            best = den.value
    out["matching"] = best
    return out
