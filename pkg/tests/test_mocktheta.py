import random

import mpmath
import pytest

from helpers import brute_sum, rel
from qmock.errors import PoleError, PreconditionError, UsageError
from qmock.identities import complete_as_psi2
from qmock.mocktheta import (Family, ParameterPoint, Psi3Denominator, classical_factors, eval_classical,
                             eval_complete, eval_generalized, generalized_factors, psi3_reduction_report)
from qmock.qcore import hp
from qmock.series import term_at

REDUCIBLE = [Family.PSI0, Family.PSI1, Family.PSI2, Family.PHI0, Family.PHI1]


def qp(a, q, n):
    return mpmath.qp(a, q, n)


def classical_oracle(family, q, N=60):
    """The classical series summed straight from their definitions."""
    terms = {
        Family.PSI0: lambda n: q ** (2 * n * n) / qp(-q, q, 2 * n),
        Family.PSI1: lambda n: q ** (2 * n * n + 2 * n) / qp(-q, q, 2 * n + 1),
        Family.PSI2: lambda n: q ** (2 * n * n + 2 * n) * qp(q, q * q, n) / (qp(q * q, q * q, n) * qp(-q, q, 2 * n)),
        Family.PSI3: lambda n: q ** (n * n) * qp(-q, q, n) ** 2 / qp(q, q, 2 * n),
        Family.PHI0: lambda n: q**n * qp(-q, q, 2 * n + 1),
        Family.PHI1: lambda n: q**n * qp(-q, q, 2 * n),
    }
    return brute_sum(terms[family], 0, N)


def test_classical_at_tiny_q():
    for fam in (Family.PSI0, Family.PSI1):
        assert rel(eval_classical(fam, "1e-30").value, 1) < 1e-25


def test_phi1_at_one_tenth():
    res = eval_classical(Family.PHI1, "0.1")
    assert res.converged
    # oracle frozen from the definition summed at 60 digits
    assert rel(res.value, mpmath.mpf("1.12345803817522474462391049486951849255804645181")) < 1e-45
    assert abs(res.value - mpmath.mpf("1.1234569")) < 2e-6


@pytest.mark.parametrize("family", list(Family))
def test_classical_against_definition(family):
    q = hp("0.3")
    N = 60 if family in (Family.PSI0, Family.PSI1, Family.PSI2, Family.PSI3) else 120
    assert rel(eval_classical(family, q).value, classical_oracle(family, q, N)) < 1e-40


@pytest.mark.parametrize("family", REDUCIBLE)
@pytest.mark.parametrize("q", ["0.1", "0.3", "0.5"])
def test_reduction_to_classical(family, q):
    q = hp(q)
    gen = eval_generalized(family, ParameterPoint(q=q, z=q, t=0, alpha=1))
    assert rel(gen.value, eval_classical(family, q).value) <= 1e-40


@pytest.mark.parametrize("q", ["0.1", "0.3", "0.5"])
def test_psi3_report_picks_generalized_denominator(q):
    rep = psi3_reduction_report(q)
    assert rep["matching"] == Psi3Denominator.GENERALIZED.value
    assert rep["variants"]["generalized"]["rel_residual"] < 1e-40
    assert rep["variants"]["printed"]["rel_residual"] > 1e-6


def _random_points(rng, count=5):
    for _ in range(count):
        yield ParameterPoint(q=rng.uniform(0.1, 0.5), z=rng.uniform(0.1, 0.6),
                             t=rng.choice([0, rng.uniform(-0.5, 0.5)]), alpha=rng.choice([-1, 0, 1, 2, 0.5]))


@pytest.mark.parametrize("family", list(Family))
def test_nonnegative_half_is_generalized(family):
    rng = random.Random(11)
    for p in _random_points(rng):
        half = eval_complete(family, p, sides="nonnegative")
        assert rel(half.value, eval_generalized(family, p).value) <= 1e-40


@pytest.mark.parametrize("family", list(Family))
def test_first_term(family):
    p = ParameterPoint(q="0.3", z="0.4", t="0.2", alpha="0.5")
    w = 1 + p.z**2 / p.q  # the (-z^2/q;q)_{2n+1} families carry (-z^2/q;q)_1 at n = 0
    expected = {Family.PSI1: 1 / w, Family.PHI0: w}.get(family, 1)
    assert rel(term_at(generalized_factors(family, p), 0), expected) < 1e-48
    classical = {Family.PSI1: 1 / (1 + p.q), Family.PHI0: 1 + p.q}.get(family, 1)
    assert rel(term_at(classical_factors(family, p.q), 0), classical) < 1e-48


def test_psi0_complete_first_negative_term():
    q, z, alpha = hp("0.3"), hp("0.4"), hp("1.5")
    p = ParameterPoint(q=q, z=z, alpha=alpha)
    expected = q ** (5 - alpha) / z**2 * (1 + z**2 / q**3) * (1 + z**2 / q**2)
    assert rel(term_at(generalized_factors(Family.PSI0, p), -1), expected) < 1e-45


def test_t_equal_q_is_a_pole_on_the_negative_side():
    p = ParameterPoint(q="0.3", z="0.4", t="0.3", alpha=1)
    with pytest.raises(PoleError):
        eval_complete(Family.PSI0, p)
    assert eval_generalized(Family.PSI0, p).converged


@pytest.mark.parametrize("t", ["1", "3.3333333333333333333333333333333333333333333333333333"])
def test_t_at_reciprocal_powers_is_rejected(t):
    with pytest.raises(PreconditionError):
        eval_generalized(Family.PSI0, ParameterPoint(q="0.3", z="0.4", t=t))


def test_continuity_in_t():
    base = ParameterPoint(q="0.3", z="0.4", alpha=1)
    v0 = eval_generalized(Family.PSI1, base).value
    d6 = abs(eval_generalized(Family.PSI1, base.with_(t="1e-6")).value - v0)
    d8 = abs(eval_generalized(Family.PSI1, base.with_(t="1e-8")).value - v0)
    assert 50 < d6 / d8 < 200


@pytest.mark.parametrize("family", [Family.PSI0, Family.PSI1, Family.PHI0, Family.PHI1])
def test_complete_matches_two_psi_two_route(family):
    p = ParameterPoint(q="0.3", z="0.35", alpha=0)
    direct = eval_complete(family, p)
    assert direct.converged
    assert rel(direct.value, complete_as_psi2(family, p).value) < 1e-40


def test_complex_point():
    p = ParameterPoint(q="0.3+0.1i", z="0.2-0.1i", t="0.1i", alpha=1)
    half = eval_complete(Family.PHI1, p, sides="nonnegative")
    assert isinstance(half.value, mpmath.mpc)
    assert rel(half.value, eval_generalized(Family.PHI1, p).value) <= 1e-40


def test_point_line_round_trip():
    p = ParameterPoint(q="0.3", z="0.2-0.1i", t="0", alpha="-1", c1="0.15", c2="0.25")
    line = p.to_line()
    assert ParameterPoint.from_line(line) == p
    assert "z=0.2-0.1i" in line


@pytest.mark.parametrize("line", ["z=0.3", "q=0.3 w=1", "q=abc", "q0.3"])
def test_bad_point_lines(line):
    with pytest.raises(UsageError):
        ParameterPoint.from_line(line)


def test_unknown_family():
    with pytest.raises(UsageError):
        eval_classical("psi9", "0.3")


def test_q_outside_disc():
    with pytest.raises(PreconditionError):
        eval_classical(Family.PSI0, "1.2")
