"""Suite configuration, point sampling, identity dispatch and JSON-lines reports."""
from __future__ import annotations

import configparser
import datetime
import json
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import mpmath

from . import __version__
from .contfrac import REPRESENTATIONS, check_cf_7_1, check_cf_representation, point_cf_spec
from .errors import ConfigError, NonConvergence, PreconditionError, SingularError, UsageError
from .identities import (BILATERAL_EXPANSIONS, PHI1_EXPANSIONS, VARIANTS, check_bilateral_expansion,
                         check_general_5_1, check_general_6_1, check_phi1_expansion, check_slater_4_1)
from .mocktheta import ParameterPoint
from .qcore import DEFAULT_PRECISION, MIN_PRECISION, TruncationPolicy, format_hp, precision
from .records import (CATALOG, DEFAULT_ASSERT_TOL, ResidualRecord, Trust, Verdict, identity_info,
                      singular_record)

MAX_RESAMPLE = 1000


# ---------------------------------------------------------------------------
# sampling

@dataclass(frozen=True)
class SamplerSpec:
    """Ranges for seeded random (or grid) points; all real."""

    q: tuple = (0.1, 0.5)
    z: tuple = (0.1, 0.6)
    alphas: tuple = (-1, 0, 1, 2)
    c: tuple = (0.05, 0.3)
    c_gap: float = 0.01
    a: tuple = (0.4, 0.9)
    b: tuple = (0.05, 0.3)
    lam: tuple = (0.1, 1.0)
    beta: tuple = (0.0, 0.9)
    count: int = 20
    seed: int = 0
    grid: int = 0

    def validate(self):
        for name in ("q", "z", "c", "a", "b", "lam", "beta"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ConfigError(f"range {name} has min {lo} > max {hi}")
        if not (0 < self.q[0] and self.q[1] < 1):
            raise ConfigError("q range must lie inside (0, 1)")
        if not (0 < self.z[0] and self.z[1] < 1):
            raise ConfigError("z range must lie inside (0, 1)")
        if not (0 <= self.beta[0] and self.beta[1] < 1):
            raise ConfigError("beta range must lie inside [0, 1)")
        if self.c[1] - self.c[0] < self.c_gap:
            raise ConfigError("c range is narrower than the required c1/c2 gap")
        if self.count < 0 or self.grid < 0:
            raise ConfigError("count and grid must be non-negative")
        if not self.alphas:
            raise ConfigError("at least one alpha value is required")
        return self


def _num(x: float) -> str:
    return f"{x:.12g}"


def sample_points(spec: SamplerSpec) -> list[ParameterPoint]:
    """Reproducible points: the same spec (including seed) gives the same list."""
    spec.validate()
    if spec.grid:
        return grid_points(spec)
    rng = random.Random(spec.seed)
    out = []
    for _ in range(spec.count):
        for _attempt in range(MAX_RESAMPLE):
            vals = {
                "q": rng.uniform(*spec.q), "z": rng.uniform(*spec.z), "alpha": rng.choice(spec.alphas),
                "c1": rng.uniform(*spec.c), "c2": rng.uniform(*spec.c),
                "a1": rng.uniform(*spec.a), "a2": rng.uniform(*spec.a),
                "b1": rng.uniform(*spec.b), "b2": rng.uniform(*spec.b),
                "lam": rng.uniform(*spec.lam), "beta": rng.uniform(*spec.beta),
            }
            if _admissible(vals, spec):
                break
        else:
            raise ConfigError(f"could not sample an admissible point in {MAX_RESAMPLE} tries; widen the ranges")
        out.append(ParameterPoint(**{k: _num(v) if isinstance(v, float) else v for k, v in vals.items()}))
    return out


def _admissible(v: dict, spec: SamplerSpec) -> bool:
    if abs(v["c1"] - v["c2"]) < spec.c_gap or abs(v["b1"] - v["b2"]) < spec.c_gap:
        return False
    # keep the general 2psi2 sums inside their annulus with some margin
    if v["b1"] * v["b2"] / (v["a1"] * v["a2"]) >= 0.9 * v["z"]:
        return False
    return v["beta"] < 0.9


def grid_points(spec: SamplerSpec) -> list[ParameterPoint]:
    """grid x grid (q, z) nodes for every alpha; the remaining parameters are fixed interior values."""
    n = spec.grid

    def nodes(lo, hi):
        return [lo] if n == 1 else [lo + (hi - lo) * i / (n - 1) for i in range(n)]

    def frac(r, t):
        return r[0] + (r[1] - r[0]) * t

    # b's sit off the c nodes so the c1, c2 expansion is not the b1, b2 one
    fixed = {"c1": frac(spec.c, 1 / 3), "c2": frac(spec.c, 2 / 3), "a1": frac(spec.a, 1 / 3),
             "a2": frac(spec.a, 2 / 3), "b1": frac(spec.b, 1 / 8), "b2": frac(spec.b, 1 / 2),
             "lam": frac(spec.lam, 1 / 3), "beta": frac(spec.beta, 1 / 3)}
    out = []
    for al in spec.alphas:
        for q in nodes(*spec.q):
            for z in nodes(*spec.z):
                vals = dict(fixed, q=q, z=z)
                out.append(ParameterPoint(alpha=al, **{k: _num(v) for k, v in vals.items()}))
    return out


def read_points(path) -> list[ParameterPoint]:
    """One point per non-blank, non-# line."""
    text = Path(path).read_text()
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(ParameterPoint.from_line(line))
        except (UsageError, PreconditionError) as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return out


def write_points(points: Iterable[ParameterPoint], path, digits: int | None = None):
    Path(path).write_text("".join(p.to_line(digits) + "\n" for p in points))


# ---------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class SuiteConfig:
    identities: tuple = tuple(CATALOG)
    points: tuple | None = None
    sampler: SamplerSpec = field(default_factory=SamplerSpec)
    precision: int = DEFAULT_PRECISION
    policy: TruncationPolicy = field(default_factory=TruncationPolicy)
    assert_tol: float = DEFAULT_ASSERT_TOL
    output_path: str | None = None
    jobs: int = 1

    def validate(self) -> "SuiteConfig":
        if not self.identities:
            raise ConfigError("no identities selected")
        for ident in self.identities:
            if str(ident) not in CATALOG:
                raise ConfigError(f"unknown identity {ident!r}")
        if self.precision < MIN_PRECISION:
            raise ConfigError(f"precision must be at least {MIN_PRECISION}")
        if not self.assert_tol > 0:
            raise ConfigError("assert_tol must be positive")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if self.points is None:
            self.sampler.validate()
        return self

    def resolved_points(self) -> list[ParameterPoint]:
        return list(self.points) if self.points is not None else sample_points(self.sampler)

    def echo(self) -> dict:
        s = self.sampler
        out = {
            "identities": list(self.identities),
            "precision": self.precision,
            "max_terms": self.policy.max_terms,
            "tail_tol": repr(self.policy.tail_tol),
            "consecutive_small": self.policy.consecutive_small,
            "assert_tol": repr(self.assert_tol),
        }
        if self.points is None:
            out["sampler"] = {"seed": s.seed, "count": s.count, "grid": s.grid, "q": list(s.q), "z": list(s.z),
                              "alphas": list(s.alphas), "c": list(s.c), "c_gap": s.c_gap, "a": list(s.a),
                              "b": list(s.b), "lam": list(s.lam), "beta": list(s.beta)}
        else:
            out["points"] = "explicit"
        return out


_RANGE_KEYS = ("q", "z", "c", "a", "b", "lam", "beta")


def read_config_file(path) -> dict:
    """Flat ``key = value`` file (``#`` comments) into a dict of strings."""
    text = Path(path).read_text()
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    try:
        cp.read_string("[suite]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return {k.replace("-", "_"): v.strip() for k, v in cp["suite"].items()}


def _float(key, v):
    try:
        return float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {v!r}") from None


def _int(key, v):
    try:
        return int(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected an integer, got {v!r}") from None


def _list(v) -> list[str]:
    if isinstance(v, (list, tuple)):
        return [str(x) for x in v]
    return [x for x in str(v).replace(",", " ").split() if x]


def build_config(values: dict) -> SuiteConfig:
    """SuiteConfig from merged key-value settings (file values overridden by CLI values).

    Recognised keys: identities, precision, max_terms, tail_tol,
    consecutive_small, assert_tol, seed, count, grid, alpha (list), points
    (path), out, jobs, <name>_min / <name>_max for q, z, c, a, b, lam, beta,
    and c_gap.
    """
    known = {"identities", "identity", "precision", "max_terms", "tail_tol", "consecutive_small", "assert_tol",
             "seed", "count", "grid", "alpha", "alphas", "points", "out", "jobs", "c_gap"}
    known |= {f"{k}_{e}" for k in _RANGE_KEYS for e in ("min", "max")}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")
    v = dict(values)
    ids = v.get("identities", v.get("identity"))
    identities = tuple(_list(ids)) if ids else tuple(CATALOG)
    for ident in identities:
        if ident not in CATALOG:
            raise ConfigError(f"unknown identity {ident!r}; known: {', '.join(CATALOG)}")
    sampler = SamplerSpec()
    changes = {}
    for k in _RANGE_KEYS:
        lo, hi = getattr(sampler, k)
        if f"{k}_min" in v or f"{k}_max" in v:
            changes[k] = (_float(f"{k}_min", v.get(f"{k}_min", lo)), _float(f"{k}_max", v.get(f"{k}_max", hi)))
    for k in ("seed", "count", "grid"):
        if k in v:
            changes[k] = _int(k, v[k])
    if "c_gap" in v:
        changes["c_gap"] = _float("c_gap", v["c_gap"])
    al = v.get("alpha", v.get("alphas"))
    if al:
        changes["alphas"] = tuple(_alpha(x) for x in _list(al))
    sampler = replace(sampler, **changes)
    try:
        policy = TruncationPolicy(
            max_terms=_int("max_terms", v.get("max_terms", 500)),
            tail_tol=_float("tail_tol", v.get("tail_tol", 1e-40)),
            consecutive_small=_int("consecutive_small", v.get("consecutive_small", 2)),
        )
    except PreconditionError as exc:
        raise ConfigError(str(exc)) from None
    points = None
    if v.get("points"):
        points = tuple(read_points(v["points"]))
    cfg = SuiteConfig(
        identities=identities,
        points=points,
        sampler=sampler,
        precision=_int("precision", v.get("precision", DEFAULT_PRECISION)),
        policy=policy,
        assert_tol=_float("assert_tol", v.get("assert_tol", DEFAULT_ASSERT_TOL)),
        output_path=v.get("out") or None,
        jobs=_int("jobs", v.get("jobs", 1)),
    )
    return cfg.validate()


def _alpha(x: str):
    f = _float("alpha", x)
    return int(f) if f.is_integer() else x


# ---------------------------------------------------------------------------
# execution

@dataclass
class Rejection:
    identity: str
    variant: str
    point_index: int
    point: ParameterPoint
    reason: str

    def to_json(self, digits=None) -> dict:
        return {"type": "rejection", "identity": self.identity, "variant": self.variant,
                "point_index": self.point_index,
                "point": {k: format_hp(x, digits) for k, x in self.point.as_dict().items()},
                "reason": self.reason}


def identity_variants(identity: str) -> tuple[str, ...]:
    info = identity_info(identity)
    return ("standard",) if info.trust is Trust.ESTABLISHED else VARIANTS


def _run_one(identity: str, variant: str, p: ParameterPoint, policy, assert_tol) -> ResidualRecord:
    if identity == "4.1":
        return check_slater_4_1(p, policy, assert_tol)
    if identity == "5.1":
        return check_general_5_1(p, policy, assert_tol)
    if identity == "6.1":
        return check_general_6_1(p, policy, assert_tol)
    if identity == "7.1":
        return check_cf_7_1(point_cf_spec(p), policy, assert_tol, point=p)
    if identity in BILATERAL_EXPANSIONS:
        return check_bilateral_expansion(identity, p, policy, variant, assert_tol)
    if identity in PHI1_EXPANSIONS:
        return check_phi1_expansion(identity, p, policy, variant, assert_tol)
    if identity in REPRESENTATIONS:
        return check_cf_representation(identity, p, policy, variant, assert_tol)
    raise UsageError(f"unknown identity {identity!r}")


def evaluate_identity(identity: str, p: ParameterPoint, policy: TruncationPolicy,
                      assert_tol=DEFAULT_ASSERT_TOL, point_index: int = 0):
    """All variant outcomes of one identity at one point: ResidualRecord or Rejection each."""
    out = []
    for variant in identity_variants(identity):
        try:
            out.append(_run_one(identity, variant, p, policy, assert_tol))
        except PreconditionError as exc:
            out.append(Rejection(identity, variant, point_index, p, f"{type(exc).__name__}: {exc}"))
        except (ZeroDivisionError, SingularError, NonConvergence) as exc:
            where = getattr(exc, "assignment", None)
            msg = str(exc) or "division by an exactly vanishing quantity"
            note = f"{type(exc).__name__}: {msg}" + (f" [{where}]" if where else "")
            out.append(singular_record(identity, p, note, variant))
    return out


def _point_task(args):
    index, point, identities, dps, policy, assert_tol = args
    with precision(dps):
        results = {}
        for ident in identities:
            results[ident] = evaluate_identity(ident, point, policy, assert_tol, index)
        return index, _serialize(results, index, dps)


def _serialize(results: dict, index: int, dps: int) -> dict:
    out = {}
    for ident, items in results.items():
        lines = []
        for item in items:
            d = item.to_json(dps)
            if d["type"] == "record":
                d = {"type": "record", "point_index": index, **{k: x for k, x in d.items() if k != "type"}}
            lines.append((d, _outcome(item)))
        out[ident] = lines
    return out


def _outcome(item):
    if isinstance(item, Rejection):
        return ("rejection", None)
    return (item.verdict.value, item.rel_residual)


@dataclass
class Report:
    header: dict
    lines: list           # record and rejection dicts in deterministic order
    summary: dict

    @property
    def established_failures(self) -> int:
        return self.summary["established_failures"]

    @property
    def exit_code(self) -> int:
        return 1 if self.established_failures else 0

    @property
    def records(self) -> list[dict]:
        return [ln for ln in self.lines if ln["type"] == "record"]

    @property
    def rejections(self) -> list[dict]:
        return [ln for ln in self.lines if ln["type"] == "rejection"]

    def to_lines(self) -> list[str]:
        objs = [self.header, *self.lines, self.summary]
        return [json.dumps(o, separators=(",", ":")) for o in objs]

    def write(self, path):
        Path(path).write_text("\n".join(self.to_lines()) + "\n")


def run_suite(config: SuiteConfig, timestamp: str | None = None) -> Report:
    """Evaluate every (identity, point, variant); records are ordered by identity, then point index."""
    config.validate()
    with precision(config.precision):
        points = config.resolved_points()
        tasks = [(i, p, tuple(config.identities), config.precision, config.policy, config.assert_tol)
                 for i, p in enumerate(points)]
        if config.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                done = dict(pool.map(_point_task, tasks))
        else:
            done = dict(_point_task(t) for t in tasks)

    lines = []
    stats = {ident: {"pass": 0, "fail": 0, "report": 0, "singular": 0, "rejected": 0, "rel": []}
             for ident in config.identities}
    for ident in config.identities:
        for i in range(len(points)):
            for d, (verdict, rel) in done[i][ident]:
                lines.append(d)
                st = stats[ident]
                if verdict == "rejection":
                    st["rejected"] += 1
                    continue
                st[verdict.lower()] += 1
                if rel is not None and verdict != Verdict.SINGULAR.value:
                    st["rel"].append(mpmath.mpf(d["rel_residual"]))

    with precision(config.precision):
        per_id = {}
        failures = 0
        for ident, st in stats.items():
            rel = st.pop("rel")
            failures += st["fail"] if CATALOG[ident].trust is Trust.ESTABLISHED else 0
            per_id[ident] = dict(st, trust=CATALOG[ident].trust.value,
                                 max_rel_residual=format_hp(max(rel), 10) if rel else None,
                                 median_rel_residual=format_hp(statistics.median(rel), 10) if rel else None)
    header = {"type": "header", "tool": "qmock", "version": __version__,
              "timestamp": timestamp or datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
              "points": len(points), "config": config.echo(),
              "note": "specializations and continued fraction representations are evaluated at t = 0"}
    summary = {"type": "summary", "records": sum(1 for ln in lines if ln["type"] == "record"),
               "rejections": sum(1 for ln in lines if ln["type"] == "rejection"),
               "established_failures": failures, "identities": per_id}
    return Report(header, lines, summary)
