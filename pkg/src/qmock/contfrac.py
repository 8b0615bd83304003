"""The lambda q^k + beta continued fraction and the CF forms of psi0,c and psi1,c.

The fraction is::

    b0 + (lam q + beta)/((1 - beta) + (lam q^2 + beta)/((1 - beta) + ...))

With ``CFForm.PRINTED`` the lead is b0 = 1 and the companion series ratio
uses (-beta;q)_n, as displayed.  That pairing only holds at beta = 0.
``CFForm.CORRECTED`` uses b0 = 1 - beta with (-beta q;q)_n, which is an
identity for every admissible beta.  Both forms share the same tail, so their
values differ by exactly beta.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import mpmath

from .errors import PoleError, PreconditionError, SingularError, UsageError
from .identities import bilateral_parameters, expand_over_b, specialization_family
from .mocktheta import Family, ParameterPoint, eval_complete
from .qcore import DEFAULT_POLICY, TruncationPolicy, base_value, hp, product_ratio, qpow
from .records import DEFAULT_ASSERT_TOL, ResidualRecord, identity_info, make_record, residual
from .results import SeriesResult, Status, exact
from .series import Geometric, Poch, QPower, sum_unilateral

CF_DEPTH_CAP = 2000
RESCALE_HIGH = mpmath.mpf(10) ** 100
RESCALE_LOW = mpmath.mpf(10) ** -100
Z_GUARD = mpmath.mpf("1e-6")
REPRESENTATIONS = ("7.4", "7.5")


class CFForm(enum.Enum):
    PRINTED = "printed"
    CORRECTED = "corrected"


@dataclass(frozen=True)
class CFSpec:
    lam: object
    beta: object
    base: object
    depth: int = 50
    form: CFForm = CFForm.PRINTED

    def __post_init__(self):
        object.__setattr__(self, "lam", hp(self.lam))
        object.__setattr__(self, "beta", hp(self.beta))
        object.__setattr__(self, "form", CFForm(self.form))
        if self.depth < 1:
            raise PreconditionError("continued fraction depth must be at least 1")

    @property
    def q(self):
        return base_value(self.base)

    @property
    def lead(self):
        return mpmath.mpf(1) if self.form is CFForm.PRINTED else 1 - self.beta

    @property
    def partial_denominator(self):
        return 1 - self.beta

    def partial_numerator(self, k: int):
        return self.lam * self.q**k + self.beta

    def with_depth(self, depth: int) -> "CFSpec":
        return replace(self, depth=depth)


@dataclass
class CFState:
    """Convergent recurrences A_k = d A_{k-1} + n_k A_{k-2}, likewise B."""

    A_prev: object
    A_curr: object
    B_prev: object
    B_curr: object
    depth: int = 0

    @classmethod
    def start(cls, lead) -> "CFState":
        one = mpmath.mpf(1)
        return cls(one, hp(lead), mpmath.mpf(0), one, 0)

    def advance(self, numerator, denominator) -> "CFState":
        a = denominator * self.A_curr + numerator * self.A_prev
        b = denominator * self.B_curr + numerator * self.B_prev
        self.A_prev, self.A_curr = self.A_curr, a
        self.B_prev, self.B_curr = self.B_curr, b
        self.depth += 1
        mag = max(abs(a), abs(b))
        if mag > RESCALE_HIGH or (0 < mag < RESCALE_LOW):
            # a common factor leaves both convergents unchanged
            s = 1 / mag
            self.A_prev *= s
            self.A_curr *= s
            self.B_prev *= s
            self.B_curr *= s
        return self

    @property
    def convergent(self):
        if self.B_curr == 0:
            raise SingularError(f"convergent denominator vanishes at depth {self.depth}")
        return self.A_curr / self.B_curr


@dataclass(frozen=True)
class CFValue:
    value: object
    delta: object
    depth: int
    stabilized: bool = True

    def as_result(self) -> SeriesResult:
        scale = max(abs(self.value), mpmath.mpf(1))
        return SeriesResult(self.value, self.depth, self.delta / scale,
                            Status.CONVERGED if self.stabilized else Status.TRUNCATED)


def cf_convergents(spec: CFSpec):
    """Yield (depth, convergent) for depth = 1, 2, ..., spec.depth."""
    st = CFState.start(spec.lead)
    d = spec.partial_denominator
    x = spec.lam * spec.q
    for k in range(1, spec.depth + 1):
        st.advance(x + spec.beta, d)
        x *= spec.q
        yield k, st.convergent


def cf_eval(spec: CFSpec) -> CFValue:
    """Depth-``spec.depth`` convergent and |C_k - C_{k-1}| as a stabilization estimate."""
    prev = spec.lead
    cur = prev
    for _, c in cf_convergents(spec):
        prev, cur = cur, c
    return CFValue(cur, abs(cur - prev), spec.depth)


def cf_nested(spec: CFSpec):
    """The same convergent evaluated bottom-up."""
    d = spec.partial_denominator
    tail = d
    for k in range(spec.depth, 1, -1):
        tail = d + spec.partial_numerator(k) / tail
    return spec.lead + spec.partial_numerator(1) / tail


def cf_stabilize(spec: CFSpec, tol, cap: int = CF_DEPTH_CAP) -> CFValue:
    """First convergent whose distance to its predecessor is below ``tol``."""
    tol = hp(tol)
    prev = spec.lead
    for k, c in cf_convergents(spec.with_depth(cap)):
        delta = abs(c - prev)
        if delta < tol:
            return CFValue(c, delta, k, True)
        prev = c
    return CFValue(prev, delta, cap, False)


def _ratio_shift(spec: CFSpec):
    return -spec.beta if spec.form is CFForm.PRINTED else -spec.beta * spec.q


def cf_series_ratio(spec: CFSpec, policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesResult:
    """sum q^{n^2} lam^n/((q)_n (c)_n) over sum q^{n^2+n} lam^n/((q)_n (c)_n).

    c is -beta for the printed form and -beta q for the corrected one.
    """
    q = spec.q
    c = _ratio_shift(spec)
    common = [Geometric(spec.lam), Poch(q, q, power=-1), Poch(c, q, power=-1)]
    num = sum_unilateral([QPower(q, 1, 0)] + common, policy)
    den = sum_unilateral([QPower(q, 1, 1)] + common, policy)
    if den.value == 0:
        raise SingularError("denominator series of the ratio vanishes")
    return num / den


def check_cf_7_1(spec: CFSpec, policy: TruncationPolicy = DEFAULT_POLICY,
                 assert_tol=DEFAULT_ASSERT_TOL, point: ParameterPoint | None = None) -> ResidualRecord:
    """Assert the corrected pairing; the printed pairing's residual goes to extras."""
    spec = replace(spec, form=CFForm.CORRECTED)
    ratio = cf_series_ratio(spec, policy)
    cf = cf_stabilize(spec, mpmath.mpf(assert_tol) / 10)
    point = point or ParameterPoint(q=spec.q, lam=spec.lam, beta=spec.beta)
    extras = {"depth": cf.depth}
    try:
        printed = replace(spec, form=CFForm.PRINTED)
        p_ratio = cf_series_ratio(printed, policy).value
        p_cf = cf.value - spec.beta  # same tail, lead 1 instead of 1 - beta
        extras["printed_ratio"] = p_ratio
        extras["printed_cf"] = p_cf
        extras["printed_rel_residual"] = residual(p_cf, p_ratio)[1]
    except (PoleError, SingularError) as exc:
        extras["printed_error"] = str(exc)
    return make_record("7.1", point, cf.as_result(), ratio, assert_tol, extras=extras)


def point_cf_spec(p: ParameterPoint, depth: int = 50) -> CFSpec:
    if p.lam is None or p.beta is None:
        raise PreconditionError("the continued fraction needs lam and beta")
    return CFSpec(p.lam, p.beta, p.q, depth)


# ---------------------------------------------------------------------------
# psi0,c and psi1,c

def _guard_z(p: ParameterPoint):
    if p.c1 is None or p.c2 is None:
        raise PreconditionError("point is missing c1, c2")
    if abs(p.z) < Z_GUARD:
        raise SingularError(f"|z| < {mpmath.nstr(Z_GUARD, 3)}: the prefactors carry 1/z^2")


def st_prefactors(p: ParameterPoint, family="psi0", policy: TruncationPolicy = DEFAULT_POLICY):
    """Printed (S, T) for psi0,c, or (S1, T1) for psi1,c, as quotients of q^2-products."""
    family = Family.parse(family)
    _guard_z(p)
    q, z, al = p.q, p.z, p.alpha
    pp, z2, C = q * q, p.z * p.z, p.c1 * p.c2
    qa = lambda e: qpow(q, e)  # noqa: E731

    def P(num, den):
        try:
            return product_ratio(num, den, pp, policy)
        except PoleError as exc:
            raise SingularError(str(exc)) from exc

    if family is Family.PSI0:
        s = -q**3 / z2 * P([pp, -z2 * z2 * qa(al - 4) / C, -qa(6 - al) * C / z2**2, -pp / z2],
                           [-z2 / q, 1 / q, z2 * qa(al - 1) / C, C * qa(3 - al) / z2])
        t = -pp / z2 * P([pp, -z2 * qa(al - 2) / C, -qa(5 - al) * C / z2**2, -q**3 / z2],
                         [z2, z2 * qa(al - 1) / C, C * qa(3 - al) / z2, q])
        return s, t
    if family is Family.PSI1:
        s = -pp / z2 * P([pp * pp, -z2 * z2 * qa(al) / C, -qa(3 - al) * C / z2**2, -q / z2],
                         [-z2, 1 / q, -z2 * qa(al + 1) / C, C * qa(1 - al) / z2])
        t = -q / z2 * P([pp, -z2 * z2 * qa(al) / C, -qa(2 - al) * C / z2**2, -pp / z2],
                        [z2 * q, q, z2 * qa(al + 1) / C, C * qa(1 - al) / z2])
        return s, t
    raise UsageError("S, T prefactors exist for psi0 and psi1 only")


def sigma_series(p: ParameterPoint, which: int, policy: TruncationPolicy = DEFAULT_POLICY,
                 n_alpha: bool = True, z_power: bool = False) -> SeriesResult:
    """sum q^{2n^2+3n+n a}/((q^3;q^2)_n (q^2;q^2)_n) (which=1) or the q^{2n^2+n+n a}/((q;q^2)_n ...) one (which=2).

    ``n_alpha=False`` uses q^a in place of q^{n a}; ``z_power=True`` adds z^{-2n}.
    """
    q, al = p.q, p.alpha
    pp = q * q
    lin, shift = (3, q**3) if which == 1 else (1, q)
    fs = [QPower(q, 2, lin + al if n_alpha else lin), Poch(shift, pp, power=-1), Poch(pp, pp, power=-1)]
    if z_power:
        fs.append(Geometric(1 / (p.z * p.z)))
    res = sum_unilateral(fs, policy)
    return res if n_alpha else res * qpow(q, al)


def derived_split(p: ParameterPoint, family, policy: TruncationPolicy = DEFAULT_POLICY):
    """Coefficients (S', T') with complete = S' sigma1(z) + T' sigma2(z), from the b1, b2 expansion.

    sigma1(z), sigma2(z) are the two sums with an extra z^{-2n}.  Returns
    (S', T', sigma1(z), sigma2(z)).
    """
    form = bilateral_parameters(family, p.q, p.z, p.alpha)
    e = expand_over_b(p.q * p.q, form.z, *form.base_args, policy, with_series=False)
    norm = e.prefactor * exact(form.k)
    if norm.value == 0:
        raise PoleError("left-hand prefactor of the b1, b2 expansion vanishes at this point")
    (c1, s1), (c2, s2) = e.terms
    return c1 / norm, c2 / norm, s1, s2


def representation_cf(p: ParameterPoint, identity: str, variant: str, policy=DEFAULT_POLICY) -> CFValue:
    """The lead-1 continued fraction used on the right of 7.4 or 7.5."""
    q, al = p.q, p.alpha
    if variant == "printed":
        if identity == "7.4":
            spec = CFSpec(1, -q, q * q, 1)              # numerators q^{2k} - q
        else:
            spec = CFSpec(qpow(q, 1 + al), -q, q, 1)    # numerators q^{1+a+k} - q
    elif variant == "substituted":
        spec = CFSpec(qpow(q, 1 + al), -q, q * q, 1)    # numerators q^{1+a+2k} - q
    elif variant == "derived":
        spec = CFSpec(qpow(q, 1 + al) / (p.z * p.z), -q, q * q, 1)
    else:
        raise UsageError(f"unknown continued fraction variant {variant!r}")
    return cf_stabilize(spec, policy.tol)


def _rep_prepare(identity, p):
    if identity == "7.3":
        raise UsageError("7.3 is an intermediate display, not a checkable endpoint")
    identity_info(identity)
    if identity not in REPRESENTATIONS:
        raise UsageError(f"{identity} is not one of {', '.join(REPRESENTATIONS)}")
    p.validate()
    if p.t != 0:
        raise PreconditionError("the continued fraction representations are stated at t = 0")
    _guard_z(p)
    return specialization_family(identity)


def check_cf_representation(identity: str, p: ParameterPoint, policy: TruncationPolicy = DEFAULT_POLICY,
                            variant: str = "printed", assert_tol=DEFAULT_ASSERT_TOL) -> ResidualRecord:
    """Residual of 7.4 (psi0,c) or 7.5 (psi1,c).

    printed: (1 -+ q) psi/sigma1 against S + T CF (7.4) or T1 + S1 CF (7.5)
    with the printed numerators and products.  derived: the exact split from
    the b1, b2 expansion, whose sums carry z^{-2n}, so the fraction has
    lam = q^{1+a}/z^2.
    """
    family = _rep_prepare(identity, p)
    q = p.q
    factor = 1 - q if identity == "7.4" else 1 + q
    psi = eval_complete(family, p, policy)
    extras = {}
    if variant == "printed":
        sig1 = sigma_series(p, 1, policy)
        sig2 = sigma_series(p, 2, policy)
        s, t = st_prefactors(p, family, policy)
        cf = representation_cf(p, identity, "printed", policy)
        lhs = factor * psi / sig1
        first, second = (s, t) if identity == "7.4" else (t, s)
        rhs = first + second * cf.as_result()
        sub = representation_cf(p, identity, "substituted", policy)
        extras["cf_depth"] = cf.depth
        extras["substituted_rhs"] = (first + second * sub.as_result()).value
        extras["substituted_rel_residual"] = residual(lhs.value, extras["substituted_rhs"])[1]
        alt = factor * psi / sigma_series(p, 1, policy, n_alpha=False)
        extras["alpha_only_lhs"] = alt.value
        extras["alpha_only_rel_residual"] = residual(alt.value, rhs.value)[1]
        dec = s * sig1 + t * sig2
        extras["decomposition"] = dec.value
        extras["decomposition_rel_residual"] = residual(psi.value, dec.value)[1]
        extras["candidate_fix"] = "sums carry z^-2n with coefficients from the b1,b2 expansion"
        try:
            s_d, t_d, sz1, sz2 = derived_split(p, family, policy)
            extras["candidate_fix_rel_residual"] = residual(psi.value, (s_d * sz1 + t_d * sz2).value)[1]
        except PoleError as exc:
            extras["candidate_fix_error"] = str(exc)
    elif variant == "derived":
        s_d, t_d, sz1, sz2 = derived_split(p, family, policy)
        cf = representation_cf(p, identity, "derived", policy)
        lhs = factor * psi / sz1
        # (1-q) sigma2(z)/sigma1(z) equals the lead-1 fraction
        rhs = factor * s_d + (factor / (1 - q)) * t_d * cf.as_result()
        extras["cf_depth"] = cf.depth
    else:
        raise UsageError(f"variant must be printed or derived, not {variant!r}")
    return make_record(identity, p, lhs, rhs, assert_tol, variant=variant, extras=extras)
