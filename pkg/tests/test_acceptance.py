"""Acceptance criteria 1-8, one test each; the terminal summary lists PASS/FAIL per criterion."""
import json
import random
import subprocess
import sys
import time

import mpmath

from helpers import rel
from qmock.contfrac import CFSpec, cf_convergents, cf_eval, cf_nested, check_cf_7_1
from qmock.harness import SamplerSpec, build_config, read_points, run_suite, sample_points, write_points
from qmock.identities import check_general_5_1, check_general_6_1, check_slater_4_1
from qmock.mocktheta import (Family, ParameterPoint, Psi3Denominator, eval_classical, eval_complete,
                             eval_generalized, psi3_reduction_report)
from qmock.qcore import hp, parse_hp, qpoch_finite, qpoch_infinite
from qmock.records import Verdict

TOL40 = mpmath.mpf(10) ** -40
PAPER_DERIVED = ["4.2", "4.3", "4.4", "4.5", "5.2", "5.3", "6.2", "6.3", "7.4", "7.5"]


def test_criterion_1_pochhammer_laws(criterion):
    start = time.perf_counter()
    rng = random.Random(2024)
    worst = mpmath.mpf(0)
    for _ in range(100):
        a = hp(complex(rng.uniform(-0.9, 0.9), rng.choice([0, rng.uniform(-0.9, 0.9)])))
        q = hp(rng.uniform(0.05, 0.6))
        n = rng.randint(-15, 15)
        worst = max(worst, rel(qpoch_finite(a, q, n + 1), qpoch_finite(a, q, n) * (1 - a * q**n)))
        m = rng.randint(0, 20)
        worst = max(worst, rel(qpoch_infinite(a, q).value, qpoch_finite(a, q, m) * qpoch_infinite(a * q**m, q).value))
        k = rng.randint(1, 15)
        worst = max(worst, rel(qpoch_finite(a, q, -k) * qpoch_finite(a * q**-k, q, k), 1))
    elapsed = time.perf_counter() - start
    criterion.append(f"max rel error {mpmath.nstr(worst, 3)} over 100 points, {elapsed:.2f} s")
    assert worst <= TOL40
    assert elapsed < 5


def test_criterion_2_reductions(criterion):
    start = time.perf_counter()
    worst = mpmath.mpf(0)
    for fam in (Family.PSI0, Family.PSI1, Family.PSI2, Family.PHI0, Family.PHI1):
        for q in ("0.1", "0.3", "0.5"):
            q = hp(q)
            gen = eval_generalized(fam, ParameterPoint(q=q, z=q, t=0, alpha=1)).value
            worst = max(worst, rel(gen, eval_classical(fam, q).value))
    matches = {psi3_reduction_report(q)["matching"] for q in ("0.1", "0.3", "0.5")}
    elapsed = time.perf_counter() - start
    criterion.append(f"max rel error {mpmath.nstr(worst, 3)}; psi3 matching denominator: {sorted(matches)}; "
                     f"{elapsed:.2f} s")
    assert worst <= TOL40
    assert matches == {Psi3Denominator.GENERALIZED.value}
    assert elapsed < 10


def test_criterion_3_bilateral_consistency(criterion):
    rng = random.Random(77)
    worst = mpmath.mpf(0)
    for fam in Family:
        for _ in range(5):
            p = ParameterPoint(q=rng.uniform(0.1, 0.5), z=rng.uniform(0.1, 0.6),
                               t=rng.choice([0, rng.uniform(-0.5, 0.5)]), alpha=rng.choice([-1, 0, 1, 2]))
            half = eval_complete(fam, p, sides="nonnegative").value
            worst = max(worst, rel(half, eval_generalized(fam, p).value))
    criterion.append(f"max rel error {mpmath.nstr(worst, 3)} over 6 x 5 points")
    assert worst <= TOL40


def test_criterion_4_established_identities(criterion):
    start = time.perf_counter()
    points = sample_points(SamplerSpec(count=20, seed=0))
    verdicts = {}
    worst = {}
    for ident, check in (("4.1", check_slater_4_1), ("5.1", check_general_5_1), ("6.1", check_general_6_1)):
        recs = [check(p) for p in points]
        verdicts[ident] = [r.verdict for r in recs]
        worst[ident] = max(r.rel_residual for r in recs)
    rng = random.Random(5)
    specs = [CFSpec(rng.uniform(0.1, 1), 0, rng.uniform(0.1, 0.5)) for _ in range(5)]
    specs += [CFSpec(p.lam, p.beta, p.q) for p in points[:15]]
    recs = [check_cf_7_1(s) for s in specs]
    verdicts["7.1"] = [r.verdict for r in recs]
    worst["7.1"] = max(r.rel_residual for r in recs)
    elapsed = time.perf_counter() - start
    betas = [s.beta for s in specs]
    summary = ", ".join(f"{k} {sum(v is Verdict.PASS for v in verdicts[k])}/{len(verdicts[k])} "
                        f"(max {mpmath.nstr(worst[k], 3)})" for k in verdicts)
    criterion.append(f"{summary}; 7.1 beta=0 at {sum(b == 0 for b in betas)} points; {elapsed:.1f} s")
    assert all(v is Verdict.PASS for vs in verdicts.values() for v in vs)
    assert all(len(vs) == 20 for vs in verdicts.values())
    assert any(b == 0 for b in betas) and all(0 <= b < mpmath.mpf("0.9") for b in betas)
    assert elapsed < 60


def test_criterion_5_continued_fraction(criterion):
    rng = random.Random(31)
    specs = [CFSpec(rng.uniform(0.05, 0.9), rng.uniform(0.01, 0.9), rng.uniform(0.1, 0.5)) for _ in range(5)]
    gap = mpmath.mpf(0)
    for spec in specs:
        for depth in (1, 2, 5, 10):
            s = spec.with_depth(depth)
            gap = max(gap, abs(cf_eval(s).value - cf_nested(s)))
    geometric = True
    for spec in specs:
        deltas, prev = [], spec.lead
        for _, c in cf_convergents(spec.with_depth(60)):
            deltas.append(abs(c - prev))
            prev = c
        rate = max(spec.beta, spec.q) + mpmath.mpf("0.1")
        geometric &= deltas[40] <= deltas[10] * rate**30
    criterion.append(f"recurrence vs nested max gap {mpmath.nstr(gap, 3)} (rounding level at 50 digits); "
                     f"geometric stabilization {'yes' if geometric else 'no'}")
    assert gap <= mpmath.mpf(10) ** -48
    assert geometric


def _finite(text):
    return text is not None and mpmath.isfinite(parse_hp(text))


def test_criterion_6_paper_derived_coverage(criterion):
    start = time.perf_counter()
    cfg = build_config({"identities": PAPER_DERIVED, "grid": 5, "alpha": ["0", "1"]})
    report = run_suite(cfg)
    elapsed = time.perf_counter() - start
    records = report.records
    bad = [r for r in records if r["verdict"] != "Singular" and not (_finite(r["lhs"]) and _finite(r["rhs"]))]
    variants = {(r["identity"], r["variant"]) for r in records}
    covered = all((i, v) in variants for i in PAPER_DERIVED for v in ("printed", "derived"))
    lines = len(report.lines)
    expected = len(PAPER_DERIVED) * 50 * 2
    singular = sum(r["verdict"] == "Singular" for r in records)
    criterion.append(f"{len(records)} records + {len(report.rejections)} rejections = {lines} of {expected}; "
                     f"{singular} Singular; variants covered {covered}; {elapsed:.1f} s")
    assert not bad
    assert lines == expected
    assert covered
    assert all(r["verdict"] in ("Report", "Singular") for r in records)
    assert elapsed < 300


def _cli(*argv, **kw):
    return subprocess.run([sys.executable, "-m", "qmock", *argv], capture_output=True, text=True, **kw)


def _without_timestamp(path):
    lines = [json.loads(x) for x in path.read_text().splitlines()]
    lines[0].pop("timestamp")
    return lines


def test_criterion_7_reproducibility(criterion, tmp_path):
    outs = []
    for name in ("a.jsonl", "b.jsonl"):
        out = tmp_path / name
        res = _cli("verify", "--identity", "4.1", "--identity", "7.1", "--identity", "5.2",
                   "--count", "4", "--seed", "13", "--out", str(out))
        assert res.returncode == 0
        outs.append(out)
    same = _without_timestamp(outs[0]) == _without_timestamp(outs[1])
    body_a = outs[0].read_text().splitlines()[1:]
    body_b = outs[1].read_text().splitlines()[1:]
    criterion.append(f"two seeded runs identical modulo timestamp: {same}; body bytes identical: {body_a == body_b}")
    assert same and body_a == body_b


def test_criterion_8_cli_contract(criterion, tmp_path):
    catalog = _cli("list-identities")
    entries = catalog.stdout.splitlines()
    pts = tmp_path / "points.txt"
    pts.write_text("q=0.3 z=0.4 t=0 alpha=1 c1=0.1 c2=0.2\nq=0.25+0.05i z=0.3-0.1i t=0 alpha=0 c1=0.12 c2=0.2\n")
    again = tmp_path / "again.txt"
    write_points(read_points(pts), again)
    round_trip = read_points(again) == read_points(pts)
    codes = {
        "ok": _cli("verify", "--identity", "7.1", "--count", "2").returncode,
        "established failure": _cli("verify", "--identity", "4.1", "--count", "1", "--assert-tol", "1e-300").returncode,
        "usage": _cli("verify", "--identity", "9.9").returncode,
        "io": _cli("verify", "--points", str(tmp_path / "missing.txt")).returncode,
    }
    criterion.append(f"catalog entries {len(entries)}; exit codes {codes}; point-file round trip {round_trip}")
    assert catalog.returncode == 0 and len(entries) == 14
    assert codes == {"ok": 0, "established failure": 1, "usage": 2, "io": 3}
    assert round_trip
