"""Bilateral transformation identities and their mock theta specializations.

Three general expansions of a 2psi2 series are implemented for parameters that
may include the :data:`~qmock.hyper.INF` limit:

* over two free parameters c1, c2 (a sum of two shifted 2psi2 series),
* over the denominator parameters b1, b2 (two 2phi1 series in z),
* over the numerator parameters a1, a2 (two 2phi1 series in b1 b2/(a1 a2 z)).

Each mock theta family with a complete form is a 2psi2 in base q^2 up to an
elementary factor K (see :func:`bilateral_parameters`), so every
specialization has a *derived* right-hand side produced by the general code.
The *printed* variants transcribe the closed forms literally; they are only
reported, never asserted.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import mpmath

from .errors import AnnulusViolation, PoleError, PreconditionError, QMockError, UsageError
from .hyper import INF, PhiSpec, Psi2Spec, is_inf, phi_eval, psi2_annulus, psi2_eval
from .mocktheta import Family, ParameterPoint, eval_complete
from .qcore import DEFAULT_POLICY, TruncationPolicy, hp, product_ratio, qpow
from .records import DEFAULT_ASSERT_TOL, ResidualRecord, identity_info, make_record, residual, singular_record
from .results import SeriesResult, exact
from .series import Geometric, Poch, QPower, sum_bilateral, sum_unilateral

BILATERAL_EXPANSIONS = ("4.2", "4.3", "4.4", "4.5")
PHI1_EXPANSIONS = ("5.2", "5.3", "6.2", "6.3")
VARIANTS = ("printed", "derived")


# ---------------------------------------------------------------------------
# helpers

def idem(expr: Callable, args: dict, x: str, y: str):
    """Evaluate ``expr(**args)`` with the values of ``x`` and ``y`` exchanged.

    Errors raised by the swapped evaluation carry ``assignment = "x<->y"``.
    """
    swapped = dict(args)
    swapped[x], swapped[y] = args[y], args[x]
    try:
        return expr(**swapped)
    except QMockError as exc:
        exc.assignment = f"{x}<->{y}"
        raise


def with_idem(expr: Callable, args: dict, x: str, y: str):
    """expr(args) + expr(args with x, y exchanged)."""
    try:
        first = expr(**args)
    except QMockError as exc:
        exc.assignment = "as given"
        raise
    return first + idem(expr, args, x, y)


def _P(num, den, base, policy, names=None) -> SeriesResult:
    return product_ratio(num, den, base, policy, names)


def _div(x, a):
    """x / a with x / INF = 0."""
    return 0 if is_inf(a) else x / a


def _mul(x, a):
    """x * a with x * INF = INF."""
    return INF if is_inf(a) else x * a


def _finite_part(params):
    prod = mpmath.mpf(1)
    n_inf = 0
    for a in params:
        if is_inf(a):
            n_inf += 1
        else:
            prod *= a
    return prod, n_inf


def _nonzero(x: SeriesResult, what: str) -> SeriesResult:
    if x.value == 0:
        raise PoleError(f"{what} vanishes at this point", factor=what)
    return x


def _established(identity, p, e: "Expansion", assert_tol, extras=None) -> ResidualRecord:
    # on a zero of the left prefactor the identity degenerates to 0 = rounding noise
    if e.prefactor.value == 0:
        return singular_record(identity, p, "left-hand prefactor vanishes at this point")
    return make_record(identity, p, e.lhs, e.rhs, assert_tol, extras=extras)


def _general_point(p: ParameterPoint, names):
    """Validate a point for the general expansions, annulus first so no prefactor divides by z = 0."""
    _require(p, names)
    p.validate()
    inner, outer = psi2_annulus(Psi2Spec(p.a1, p.a2, p.b1, p.b2, p.q, p.z))
    if not (inner < abs(p.z) < outer):
        raise AnnulusViolation(f"|z| = {mpmath.nstr(abs(p.z), 8)} outside the annulus "
                               f"{mpmath.nstr(inner, 8)} < |z| < {mpmath.nstr(outer, 8)}")


def _require(p: ParameterPoint, names):
    missing = [n for n in names if getattr(p, n) is None]
    if missing:
        raise PreconditionError(f"point is missing {', '.join(missing)}")


@dataclass
class Expansion:
    """Both sides of a general expansion.

    ``lhs`` is ``prefactor * series`` (None when the series was skipped).
    ``terms`` holds one (coefficient, series) pair per exchanged assignment
    and ``rhs`` is the sum of their products.
    """

    prefactor: SeriesResult
    series: SeriesResult | None
    terms: tuple

    @property
    def rhs(self):
        (c1, s1), (c2, s2) = self.terms
        return c1 * s1 + c2 * s2

    @property
    def lhs(self):
        return None if self.series is None else self.prefactor * self.series


# ---------------------------------------------------------------------------
# general expansions

def expand_over_c(q, z, a1, a2, b1, b2, c1, c2, policy: TruncationPolicy = DEFAULT_POLICY,
                  with_series: bool = True) -> Expansion:
    """2psi2[a1,a2;b1,b2;q,z] expanded over two free parameters c1, c2.

    With d = a1 a2/(c1 c2)::

        (b1,b2,q/a1,q/a2,dz,q/(dz))/(c1,c2,q/c1,q/c2) 2psi2[a1,a2;b1,b2;q,z]
          = q/c1 (c1/a1,c1/a2,qb1/c1,qb2/c1,dc1z/q,q^2/(dc1z))/(c1,q/c1,c1/c2,qc2/c1)
              * 2psi2[qa1/c1,qa2/c1;qb1/c1,qb2/c1;q,z] + idem(c1;c2)

    INF numerators are allowed; ``z`` is then the rescaled argument.
    """
    q, z, c1, c2 = hp(q), hp(z), hp(c1), hp(c2)
    fin, k = _finite_part((a1, a2))
    dz = fin * z / (c1 * c2)
    pref = _P([b1, b2, _div(q, a1), _div(q, a2), dz, q / dz], [c1, c2, q / c1, q / c2], q, policy,
              ["c1", "c2", "q/c1", "q/c2"])
    series = psi2_eval(Psi2Spec(a1, a2, b1, b2, q, z), policy) if with_series else None

    def term(c1, c2):
        s = q / c1
        pre = _P([_div(c1, a1), _div(c1, a2), s * b1, s * b2, fin * z / (c2 * q), q * q * c2 / (fin * z)],
                 [c1, s, c1 / c2, q * c2 / c1], q, policy, ["c1", "q/c1", "c1/c2", "q*c2/c1"])
        shifted = psi2_eval(Psi2Spec(_mul(s, a1), _mul(s, a2), s * b1, s * b2, q, z * s**k), policy)
        return s * pre, shifted

    args = {"c1": c1, "c2": c2}
    return Expansion(pref, series, (term(**args), idem(term, args, "c1", "c2")))


def expand_over_b(q, z, a1, a2, b1, b2, policy: TruncationPolicy = DEFAULT_POLICY,
                  with_series: bool = True, form: str = "corrected") -> Expansion:
    """2psi2 as two 2phi1 series in z, obtained from :func:`expand_over_c` at c_j = b_j.

    With d = a1 a2/(b1 b2)::

        (q/a1,q/a2,dz,q/(dz))/(q/b1,q/b2) 2psi2[a1,a2;b1,b2;q,z]
          = q/b1 (q,b1/a1,b1/a2,db1z/q,q^2/(db1z))/(b1,q/b1,b1/b2)
              * 2phi1[qa1/b1,qa2/b1;qb2/b1;q,z] + idem(b1;b2)

    ``form="printed"`` replaces the 2phi1 by 2phi1[qa1,qa2;b1;q,z], which
    does not satisfy the identity; it is kept for reporting.
    """
    if form not in ("corrected", "printed"):
        raise UsageError(f"form must be corrected or printed, not {form!r}")
    q, z, b1, b2 = hp(q), hp(z), hp(b1), hp(b2)
    fin, k = _finite_part((a1, a2))
    dz = fin * z / (b1 * b2)
    pref = _P([_div(q, a1), _div(q, a2), dz, q / dz], [q / b1, q / b2], q, policy, ["q/b1", "q/b2"])
    series = psi2_eval(Psi2Spec(a1, a2, b1, b2, q, z), policy) if with_series else None

    def term(b1, b2):
        s = q / b1
        pre = _P([q, _div(b1, a1), _div(b1, a2), fin * z / (b2 * q), q * q * b2 / (fin * z)],
                 [b1, s, b1 / b2], q, policy, ["b1", "q/b1", "b1/b2"])
        if form == "corrected":
            phi = phi_eval(PhiSpec([_mul(s, a1), _mul(s, a2)], [s * b2], q, z * s**k), policy)
        else:
            phi = phi_eval(PhiSpec([_mul(q, a1), _mul(q, a2)], [b1], q, z * q**k), policy)
        return s * pre, phi

    args = {"b1": b1, "b2": b2}
    return Expansion(pref, series, (term(**args), idem(term, args, "b1", "b2")))


def expand_over_a(q, z, a1, a2, b1, b2, policy: TruncationPolicy = DEFAULT_POLICY,
                  with_series: bool = True) -> Expansion:
    """2psi2 as two 2phi1 series in b1 b2/(a1 a2 z), from :func:`expand_over_c` at c_j = q a_j::

        (b1,b2,q/a1,q/a2,z,q/z)/(qa1,qa2,1/a1,1/a2) 2psi2[a1,a2;b1,b2;q,z]
          = a1 (q,qa1/a2,b1/a1,b2/a1,a1z,q/(a1z))/(qa1,1/a1,a1/a2,qa2/a1)
              * 2phi1[qa1/b1,qa1/b2;qa1/a2;q,b1b2/(a1a2z)] + idem(a1;a2)

    A zero b_j turns qa1/b_j into an INF numerator.
    """
    q, z, a1, a2 = hp(q), hp(z), hp(a1), hp(a2)
    pref = _P([b1, b2, q / a1, q / a2, z, q / z], [q * a1, q * a2, 1 / a1, 1 / a2], q, policy,
              ["q*a1", "q*a2", "1/a1", "1/a2"])
    series = psi2_eval(Psi2Spec(a1, a2, b1, b2, q, z), policy) if with_series else None

    def term(a1, a2):
        pre = _P([q, q * a1 / a2, b1 / a1, b2 / a1, a1 * z, q / (a1 * z)],
                 [q * a1, 1 / a1, a1 / a2, q * a2 / a1], q, policy, ["q*a1", "1/a1", "a1/a2", "q*a2/a1"])
        nums = []
        w = 1 / (a1 * a2 * z)
        for b in (b1, b2):
            if b == 0:
                nums.append(INF)
                w *= q * a1
            else:
                nums.append(q * a1 / b)
                w *= b
        phi = phi_eval(PhiSpec(nums, [q * a1 / a2], q, w), policy)
        return a1 * pre, phi

    args = {"a1": a1, "a2": a2}
    return Expansion(pref, series, (term(**args), idem(term, args, "a1", "a2")))


# ---------------------------------------------------------------------------
# Established checks

def check_slater_4_1(p: ParameterPoint, policy: TruncationPolicy = DEFAULT_POLICY,
                     assert_tol=DEFAULT_ASSERT_TOL) -> ResidualRecord:
    _general_point(p, ("a1", "a2", "b1", "b2", "c1", "c2"))
    e = expand_over_c(p.q, p.z, p.a1, p.a2, p.b1, p.b2, p.c1, p.c2, policy)
    return _established("4.1", p, e, assert_tol)


def check_general_5_1(p: ParameterPoint, policy: TruncationPolicy = DEFAULT_POLICY,
                      assert_tol=DEFAULT_ASSERT_TOL) -> ResidualRecord:
    """Asserts the corrected 2phi1 form; the printed form's residual goes to extras."""
    _general_point(p, ("a1", "a2", "b1", "b2"))
    e = expand_over_b(p.q, p.z, p.a1, p.a2, p.b1, p.b2, policy)
    extras = {}
    try:
        printed = expand_over_b(p.q, p.z, p.a1, p.a2, p.b1, p.b2, policy, with_series=False, form="printed")
        extras["printed_rhs"] = printed.rhs.value
        extras["printed_rel_residual"] = residual(e.lhs.value, printed.rhs.value)[1]
    except (QMockError, ZeroDivisionError) as exc:
        extras["printed_error"] = str(exc)
    return _established("5.1", p, e, assert_tol, extras)


def check_general_6_1(p: ParameterPoint, policy: TruncationPolicy = DEFAULT_POLICY,
                      assert_tol=DEFAULT_ASSERT_TOL) -> ResidualRecord:
    _general_point(p, ("a1", "a2", "b1", "b2"))
    e = expand_over_a(p.q, p.z, p.a1, p.a2, p.b1, p.b2, policy)
    return _established("6.1", p, e, assert_tol)


# ---------------------------------------------------------------------------
# mock theta specializations

@dataclass(frozen=True)
class BilateralForm:
    """Complete function = 2psi2[a1,a2;b1,b2;q^2,Z] / K, with Z already rescaled for INF numerators."""

    family: Family
    a1: object
    a2: object
    b1: object
    b2: object
    z: object
    k: object

    @property
    def base_args(self):
        return self.a1, self.a2, self.b1, self.b2


def bilateral_parameters(family, q, z, alpha) -> BilateralForm:
    """2psi2 data of the complete forms of psi0, psi1, phi0 and phi1 in base q^2."""
    family = Family.parse(family)
    q, z = hp(q), hp(z)
    z2 = z * z
    if family is Family.PSI0:
        return BilateralForm(family, INF, INF, -z2 / q, -z2, z2 * qpow(q, alpha - 1), mpmath.mpf(1))
    if family is Family.PSI1:
        return BilateralForm(family, INF, INF, -z2, -z2 * q, z2 * qpow(q, alpha + 1), 1 + z2 / q)
    if family is Family.PHI0:
        return BilateralForm(family, -z2, -z2 * q, 0, 0, z2 * qpow(q, 1 - 2 * alpha), 1 / (1 + z2 / q))
    if family is Family.PHI1:
        return BilateralForm(family, -z2 / q, -z2, 0, 0, z2 * qpow(q, 1 - 2 * alpha), mpmath.mpf(1))
    raise UsageError(f"{family.value} has no 2psi2 form")


_FAMILY = {"4.2": Family.PSI0, "4.3": Family.PSI1, "4.4": Family.PHI0, "4.5": Family.PHI1,
           "5.2": Family.PSI0, "5.3": Family.PSI1, "6.2": Family.PHI0, "6.3": Family.PHI1,
           "7.4": Family.PSI0, "7.5": Family.PSI1}


def specialization_family(identity: str) -> Family:
    try:
        return _FAMILY[identity]
    except KeyError:
        raise UsageError(f"{identity!r} is not a mock theta specialization") from None


def _prepare(identity: str, p: ParameterPoint, needs_c: bool):
    identity_info(identity)
    _require(p, ("c1", "c2") if needs_c else ())
    p.validate()
    if p.t != 0:
        raise PreconditionError("the specializations are stated at t = 0")
    if p.z == 0:
        raise PreconditionError("the specializations need z != 0")
    q = p.q
    return q, q * q, p.z, p.z * p.z, p.alpha


def _complete(identity, p, policy):
    return eval_complete(specialization_family(identity), p, policy)


def _bilateral(fs, policy):
    return sum_bilateral(fs, policy)


# printed transcriptions of the bilateral expansions -------------------------

def _printed_bilateral(identity, p, policy):
    q, pp, z, z2, al = _prepare(identity, p, True)
    c1, c2 = p.c1, p.c2
    C = c1 * c2
    qa = lambda e: qpow(q, e)  # noqa: E731
    extras = {}

    if identity == "4.2":
        pref = _P([-z2 / q, -z2, z2 * qa(al - 1) / C, C * qa(3 - al) / z2], [c1, c2, pp / c1, pp / c2], pp, policy)

        def term(c1, c2, alt=False):
            pre = q**2 * _P([-z2 * q / c1, -z2 * q * q / c1, z2 * qa(al - 1) / (c1 * c2), c1 * qa(5 - al) / z2],
                            [c1, pp / c1, c1 / c2, pp * c2 / c1], pp, policy)
            fs = [QPower(q, 2, 1 + al), Geometric(z2 / c1**2),
                  Poch(-z2 * q / c1, pp, power=-1), Poch(-z2 * q * q / c1, pp, power=-1)]
            return pre * _bilateral(fs, policy)
    elif identity == "4.3":
        pref = _P([-z2, -z2 * q, z2 * q * q / C, C / z2], [c1, c2, pp / c1, pp / c2], pp, policy)

        def term(c1, c2, alt=False):
            pre = q**2 / c1 * _P([-z2 * pp / c1, -z2 * q**3 / c1, z2 / c2, c1 / z2],
                                 [c1, pp / c1, c1 / c2, pp * c2 / c1], pp, policy)
            fs = [Geometric(z2 / c1**2), Poch(-z2 * pp / c1, pp, power=-1), Poch(-z2 * q**3 / c1, pp, power=-1)]
            if alt:  # q^{n alpha} instead of q^alpha
                return pre * _bilateral(fs + [QPower(q, 2, 3 + al)], policy)
            return pre * qa(al) * _bilateral(fs + [QPower(q, 2, 3)], policy)
    elif identity == "4.4":
        pref = _P([-pp / z2, -q / z2, z2**3 * qa(2 - 2 * al) / C, C * qa(2 * al) / z2**2],
                  [c1, c2, pp / c1, pp / c2], pp, policy)

        def term(c1, c2, alt=False):
            pre = q**2 / c1 * _P([-c1 / z2, -c1 / (z2 * q), z2**3 / (qa(2 * al) * c2), c1 * qa(2 * al) / z2],
                                 [c1, pp / c1, c1 / c2, pp * c2 / c1], pp, policy)
            fs = [QPower(q, 0, 1 - 2 * al), Geometric(z2), Poch(-z2 * pp / c1, pp), Poch(-z2 * q**3 / c1, pp)]
            return pre * _bilateral(fs, policy)
    elif identity == "4.5":
        pref = _P([-q**3 / z, -pp / z2, z2**3 / (C * qa(2 * al)), C * qa(2 + 2 * al) / z2**3],
                  [c1, c2, pp / c1, pp / c2], pp, policy)

        def term(c1, c2, alt=False):
            pre = q**2 / c1 * _P([-c1 / z2, -q * c1 / z2, z2**3 * qa(-2 - 2 * al) / c2, c2 * qa(2 + 2 * al) / z2**3],
                                 [c1, pp / c1, c1 / c2, pp * c2 / c1], pp, policy)
            fs = [QPower(q, 0, 1 - 2 * al), Geometric(z2), Poch(-z2 * q / c1, pp), Poch(-z2 * pp / c1, pp)]
            return pre * _bilateral(fs, policy)
    else:
        raise UsageError(f"{identity!r} is not a bilateral expansion")

    lhs = pref * _complete(identity, p, policy)
    args = {"c1": c1, "c2": c2}
    rhs = with_idem(term, args, "c1", "c2")
    if identity == "4.3":
        alt = with_idem(lambda c1, c2: term(c1, c2, alt=True), args, "c1", "c2")
        extras["n_alpha_rhs"] = alt.value
        extras["n_alpha_rel_residual"] = residual(lhs.value, alt.value)[1]
    return lhs, rhs, extras


def _derived_bilateral(identity, p, policy):
    q, pp, z, z2, al = _prepare(identity, p, True)
    form = bilateral_parameters(specialization_family(identity), q, z, al)
    e = expand_over_c(pp, form.z, *form.base_args, p.c1, p.c2, policy, with_series=False)
    lhs = e.prefactor * form.k * _complete(identity, p, policy)
    return lhs, e.rhs, {}


def derived_psi0_expansion_rhs(p: ParameterPoint, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """Closed form of the c1, c2 expansion of psi0,c, written out by hand.

    Its left side is (-z^2/q,-z^2,z^2 q^{a-1}/(c1c2),c1c2 q^{3-a}/z^2;q^2)_inf
    / (c1,c2,q^2/c1,q^2/c2;q^2)_inf * psi0,c, and each right-hand term is::

        q^2/c1 (-z^2q/c1,-z^2q^2/c1,z^2q^{a-3}/c2,c2q^{5-a}/z^2;q^2)_inf
               / (c1,q^2/c1,c1/c2,q^2c2/c1;q^2)_inf
        * sum_n q^{2n^2+n+na} z^{2n} c1^{-2n} / (-z^2q/c1,-z^2q^2/c1;q^2)_n
    """
    q, pp, z, z2, al = _prepare("4.2", p, True)
    qa = lambda e: qpow(q, e)  # noqa: E731

    def term(c1, c2):
        pre = q**2 / c1 * _P([-z2 * q / c1, -z2 * pp / c1, z2 * qa(al - 3) / c2, c2 * qa(5 - al) / z2],
                             [c1, pp / c1, c1 / c2, pp * c2 / c1], pp, policy)
        fs = [QPower(q, 2, 1 + al), Geometric(z2 / c1**2),
              Poch(-z2 * q / c1, pp, power=-1), Poch(-z2 * pp / c1, pp, power=-1)]
        return pre * _bilateral(fs, policy)

    return with_idem(term, {"c1": p.c1, "c2": p.c2}, "c1", "c2")


def check_bilateral_expansion(identity: str, p: ParameterPoint, policy: TruncationPolicy = DEFAULT_POLICY,
                              variant: str = "printed", assert_tol=DEFAULT_ASSERT_TOL) -> ResidualRecord:
    """Residual of a c1, c2 expansion of a complete mock theta function."""
    if identity not in BILATERAL_EXPANSIONS:
        identity_info(identity)
        raise UsageError(f"{identity} is not one of {', '.join(BILATERAL_EXPANSIONS)}")
    if variant == "printed":
        lhs, rhs, extras = _printed_bilateral(identity, p, policy)
    elif variant == "derived":
        lhs, rhs, extras = _derived_bilateral(identity, p, policy)
    else:
        raise UsageError(f"variant must be printed or derived, not {variant!r}")
    return make_record(identity, p, lhs, rhs, assert_tol, variant=variant, extras=extras)


# printed transcriptions of the 2phi1 expansions ----------------------------

def printed_phi1_term(identity: str, p: ParameterPoint, x, y, policy: TruncationPolicy = DEFAULT_POLICY,
                      n_alpha: bool = False) -> SeriesResult:
    """One printed right-hand term, written in the exchanged pair (x, y).

    At the natural ordering this is the literal closed form.  Factors that
    cannot be expressed through the pair stay as printed when exchanged.
    """
    q, pp, z, z2, al = _prepare(identity, p, identity in ("5.2", "5.3"))
    qa = lambda e: qpow(q, e)  # noqa: E731
    x, y = hp(x), hp(y)
    if identity in ("5.2", "5.3"):
        b1, b2 = x, y
        C = p.c1 * p.c2
        Z = z2 * qa(al - 1) if identity == "5.2" else z2 * qa(al + 1)
        if identity == "5.2":
            num = [pp, Z * b1 / (C * pp), pp * pp * C / (Z * b1), pp / b2]
        else:
            num = [pp * pp, -z2 * z2 * qa(al) / C, pp * pp * C / (Z * b1), pp / b2]
        pre = pp / b1 * _P(num, [b1, b1 / b2, Z / C, pp * C / Z], pp, policy)
        fs = [QPower(pp, 1, -1), Poch(pp * b2 / b1, pp, power=-1)]
        if identity == "5.2":
            fs.append(Poch(pp, pp, power=-1))
        if n_alpha:
            fs.append(Geometric(pp * pp * Z / b1**2))
            return pre * sum_unilateral(fs, policy)
        fs.append(Geometric(pp * pp * Z / (b1**2 * qa(al))))
        return pre * qa(al) * sum_unilateral(fs, policy)
    if identity in ("6.2", "6.3"):
        a1, a2 = x, y
        w = z2 * qa(1 - 2 * al)
        if identity == "6.2":
            num = [pp, pp * a1 / a2, a1 * w, pp / (a1 * w), pp * a2, 1 / a2]
            den = [a1 / a2, pp * a2 / a1, pp / a1, pp / a2, w, pp / w]
        else:
            num = [pp, pp * a1 / a2, -z2 * qa(-2 * al), pp / (a1 * w), pp * a2, 1 / a2]
            den = [a1 / a2, pp * a2 / a1, pp / a2, -q / z2, w, pp / w]
        pre = a1 * _P(num, den, pp, policy)
        fs = [Geometric(w), Poch(pp * a1 / a2, pp, power=-1)]
        return pre * sum_unilateral(fs, policy)
    raise UsageError(f"{identity!r} is not a 2phi1 expansion")


def natural_pair(identity: str, p: ParameterPoint):
    """The (x, y) values of the exchanged pair in a printed 2phi1 expansion."""
    q, z2 = p.q, p.z * p.z
    if identity == "5.2":
        return -z2 / q, -z2
    if identity == "5.3":
        return -z2, -z2 * q
    if identity == "6.2":
        return -z2, -z2 * q
    if identity == "6.3":
        return -z2 / q, -z2
    raise UsageError(f"{identity!r} is not a 2phi1 expansion")


def _printed_phi1(identity, p, policy):
    x, y = natural_pair(identity, p)
    lhs = _complete(identity, p, policy)
    term = lambda x, y: printed_phi1_term(identity, p, x, y, policy)  # noqa: E731
    rhs = with_idem(term, {"x": x, "y": y}, "x", "y")
    extras = {}
    if identity in ("5.2", "5.3"):
        alt = with_idem(lambda x, y: printed_phi1_term(identity, p, x, y, policy, n_alpha=True),
                        {"x": x, "y": y}, "x", "y")
        extras["n_alpha_rhs"] = alt.value
        extras["n_alpha_rel_residual"] = residual(lhs.value, alt.value)[1]
    return lhs, rhs, extras


def _derived_phi1(identity, p, policy):
    q, pp, z, z2, al = _prepare(identity, p, False)
    form = bilateral_parameters(specialization_family(identity), q, z, al)
    if identity in ("5.2", "5.3"):
        e = expand_over_b(pp, form.z, *form.base_args, policy, with_series=False)
    else:
        e = expand_over_a(pp, form.z, *form.base_args, policy, with_series=False)
    lhs = _complete(identity, p, policy)
    return lhs, e.rhs / _nonzero(e.prefactor * form.k, "left-hand prefactor"), {}


def check_phi1_expansion(identity: str, p: ParameterPoint, policy: TruncationPolicy = DEFAULT_POLICY,
                         variant: str = "printed", assert_tol=DEFAULT_ASSERT_TOL) -> ResidualRecord:
    """Residual of a complete mock theta function against its 2phi1-type expansion."""
    if identity not in PHI1_EXPANSIONS:
        identity_info(identity)
        raise UsageError(f"{identity} is not one of {', '.join(PHI1_EXPANSIONS)}")
    if variant == "printed":
        lhs, rhs, extras = _printed_phi1(identity, p, policy)
    elif variant == "derived":
        lhs, rhs, extras = _derived_phi1(identity, p, policy)
    else:
        raise UsageError(f"variant must be printed or derived, not {variant!r}")
    return make_record(identity, p, lhs, rhs, assert_tol, variant=variant, extras=extras)


def complete_as_psi2(family, p: ParameterPoint, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """The complete form evaluated through its 2psi2 representation."""
    form = bilateral_parameters(family, p.q, p.z, p.alpha)
    return psi2_eval(Psi2Spec(*form.base_args, p.q * p.q, form.z), policy) / exact(form.k)
