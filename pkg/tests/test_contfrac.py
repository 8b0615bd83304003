import random

import mpmath
import pytest

from helpers import brute_sum, rel
from qmock.contfrac import (CFForm, CFSpec, CFState, cf_convergents, cf_eval, cf_nested, cf_series_ratio,
                            cf_stabilize, check_cf_7_1, check_cf_representation, derived_split,
                            representation_cf, st_prefactors)
from qmock.errors import PoleError, PreconditionError, SingularError, UsageError
from qmock.mocktheta import Family, ParameterPoint, eval_complete
from qmock.qcore import hp
from qmock.records import Verdict
from qmock.results import Status


def random_specs(seed, count=5):
    rng = random.Random(seed)
    return [CFSpec(rng.uniform(0.05, 0.9), rng.uniform(0.01, 0.9), rng.uniform(0.1, 0.5)) for _ in range(count)]


def rr_ratio(q):
    """Rogers-Ramanujan quotient G(q)/H(q) from the product side."""
    q5 = q**5
    return mpmath.qp(q**2, q5) * mpmath.qp(q**3, q5) / (mpmath.qp(q, q5) * mpmath.qp(q**4, q5))


def test_trivial_fraction():
    for depth in (1, 3, 10):
        assert cf_eval(CFSpec(0, 0, "0.3", depth)).value == 1


def test_depth_one_closed_form():
    lam, beta, q = hp("0.3"), hp("0.4"), hp("0.2")
    assert rel(cf_eval(CFSpec(lam, beta, q, 1)).value, 1 + (lam * q + beta) / (1 - beta)) < 1e-48


@pytest.mark.parametrize("depth", [1, 2, 5, 10])
def test_recurrence_equals_nested(depth):
    for spec in random_specs(3):
        spec = spec.with_depth(depth)
        assert abs(cf_eval(spec).value - cf_nested(spec)) <= 1e-48


def test_rescaling_leaves_convergents_alone():
    st = CFState.start(1)
    st.advance(mpmath.mpf(10) ** 120, 1)
    before = st.convergent
    assert max(abs(st.A_curr), abs(st.B_curr)) <= 1
    assert rel(before, 1 + mpmath.mpf(10) ** 120) < 1e-48


def test_zero_denominator_is_singular():
    st = CFState.start(1).advance(1, 0)
    with pytest.raises(SingularError):
        st.convergent


def test_geometric_stabilization():
    for spec in random_specs(5):
        deltas, prev = [], spec.lead
        for _, c in cf_convergents(spec.with_depth(60)):
            deltas.append(abs(c - prev))
            prev = c
        rate = max(spec.beta, spec.q) + mpmath.mpf("0.1")
        assert deltas[40] <= deltas[10] * rate**30
        for k in range(5, 40):
            if deltas[k]:
                assert deltas[k + 1] / deltas[k] < min(rate, 1)


def test_rogers_ramanujan_degeneration():
    q = hp("0.1")
    spec = CFSpec(1, 0, q, 50)
    assert abs(cf_eval(spec).value - cf_series_ratio(spec).value) < 1e-30
    assert rel(cf_eval(spec).value, rr_ratio(q)) < 1e-45


@pytest.mark.parametrize("form,shift", [(CFForm.PRINTED, 1), (CFForm.CORRECTED, "q")])
def test_series_ratio_against_direct_sum(form, shift):
    q, lam, beta = hp("0.2"), hp("0.3"), hp("0.4")
    c = -beta if shift == 1 else -beta * q

    def s(extra):
        return brute_sum(lambda n: q ** (n * n + extra * n) * lam**n / (mpmath.qp(q, q, n) * mpmath.qp(c, q, n)), 0, 40)

    ratio = cf_series_ratio(CFSpec(lam, beta, q, form=form))
    assert rel(ratio.value, s(0) / s(1)) < 1e-45


def test_series_ratio_trivial():
    assert cf_series_ratio(CFSpec(0, "0.4", "0.3")).value == 1


@pytest.mark.parametrize("q,lam,beta", [("0.2", "0.3", "0.4"), ("0.5", "1", "0"), ("0.4", "0.8", "0.89")])
def test_seven_one_passes(q, lam, beta):
    rec = check_cf_7_1(CFSpec(lam, beta, q))
    assert rec.verdict is Verdict.PASS
    assert rec.extras["depth"] >= 1


def test_seven_one_printed_pairing_is_off_by_beta():
    rec = check_cf_7_1(CFSpec("0.3", "0.4", "0.2"))
    assert abs(rec.extras["printed_cf"] - (rec.lhs - hp("0.4"))) < 1e-45
    assert rec.extras["printed_rel_residual"] > 1e-3
    rr = check_cf_7_1(CFSpec("1", "0", "0.1"))
    assert rr.extras["printed_rel_residual"] < 1e-30


def test_seven_one_pole():
    q = hp("0.5")
    with pytest.raises(PoleError):
        check_cf_7_1(CFSpec("0.3", -1 / q, q))


def test_stabilization_cap_reports_truncation():
    val = cf_stabilize(CFSpec("0.5", "0.89", "0.5"), mpmath.mpf("1e-45"), cap=20)
    assert not val.stabilized
    assert val.as_result().status is Status.TRUNCATED


def test_substitution_arithmetic():
    q, alpha = hp("0.3"), 1
    spec = CFSpec(q ** (1 + alpha), -q, q * q)
    for k in range(1, 8):
        assert rel(spec.partial_numerator(k), q ** (3 + alpha + 2 * (k - 1)) - q) < 1e-48
    assert spec.partial_denominator == 1 + q


def _rep_point(**changes):
    return ParameterPoint(q="0.25", z="0.4", alpha=1, c1="0.1", c2="0.15").with_(**changes)


def test_st_prefactors_finite():
    p = ParameterPoint(q="0.3", z="0.5", alpha=1, c1="0.1", c2="0.2")
    for fam in ("psi0", "psi1"):
        s, t = st_prefactors(p, fam)
        assert mpmath.isfinite(s.value) and mpmath.isfinite(t.value)
        assert s.value != 0 and t.value != 0


def test_st_prefactors_guard_small_z():
    with pytest.raises(SingularError):
        st_prefactors(ParameterPoint(q="0.3", z="1e-7", alpha=1, c1="0.1", c2="0.2"))
    with pytest.raises(UsageError):
        st_prefactors(ParameterPoint(q="0.3", z="0.5", alpha=1, c1="0.1", c2="0.2"), "phi0")


@pytest.mark.parametrize("identity", ["7.4", "7.5"])
def test_representation_records(identity):
    p = _rep_point()
    printed = check_cf_representation(identity, p, variant="printed")
    derived = check_cf_representation(identity, p, variant="derived")
    for rec in (printed, derived):
        assert rec.verdict is Verdict.REPORT
        assert mpmath.isfinite(rec.lhs) and mpmath.isfinite(rec.rhs)
    assert derived.rel_residual < 1e-35
    assert printed.extras["candidate_fix_rel_residual"] < 1e-35
    assert "decomposition_rel_residual" in printed.extras


@pytest.mark.parametrize("family", [Family.PSI0, Family.PSI1])
def test_derived_split_reproduces_complete_form(family):
    p = _rep_point()
    s, t, sig1, sig2 = derived_split(p, family)
    assert rel((s * sig1 + t * sig2).value, eval_complete(family, p).value) < 1e-38


def test_derived_fraction_matches_sum_ratio():
    p = _rep_point()
    q = p.q
    _, _, sig1, sig2 = derived_split(p, Family.PSI0)
    cf = representation_cf(p, "7.4", "derived")
    assert cf.stabilized
    # the lead-1 fraction with lam = q^{1+a}/z^2 equals (1 - q) sigma2(z)/sigma1(z)
    assert rel(cf.value, (1 - q) * sig2.value / sig1.value) < 1e-38


def test_representation_rejections():
    with pytest.raises(UsageError):
        check_cf_representation("7.3", _rep_point())
    with pytest.raises(UsageError):
        check_cf_representation("7.1", _rep_point())
    with pytest.raises(PreconditionError):
        check_cf_representation("7.4", _rep_point(t="0.1"))
    with pytest.raises(UsageError):
        check_cf_representation("7.4", _rep_point(), variant="other")
