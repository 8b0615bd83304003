"""Identity catalog, verdicts and residual records."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import mpmath

from .errors import UsageError
from .qcore import format_hp
from .results import SeriesResult, Status

DEFAULT_ASSERT_TOL = 1e-30
RESIDUAL_FLOOR = "1e-30"  # parsed at the working precision


class Trust(enum.Enum):
    ESTABLISHED = "Established"
    PAPER_DERIVED = "PaperDerived"


class Verdict(enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    REPORT = "Report"
    SINGULAR = "Singular"


@dataclass(frozen=True)
class IdentityInfo:
    id: str
    trust: Trust
    params: tuple[str, ...]
    summary: str
    swap: tuple[str, str] | None = None


CATALOG: dict[str, IdentityInfo] = {
    info.id: info
    for info in [
        IdentityInfo("4.1", Trust.ESTABLISHED, ("q", "z", "a1", "a2", "b1", "b2", "c1", "c2"),
                     "2psi2 expansion over two free parameters c1, c2", ("c1", "c2")),
        IdentityInfo("4.2", Trust.PAPER_DERIVED, ("q", "z", "alpha", "c1", "c2"),
                     "bilateral expansion of psi0,c", ("c1", "c2")),
        IdentityInfo("4.3", Trust.PAPER_DERIVED, ("q", "z", "alpha", "c1", "c2"),
                     "bilateral expansion of psi1,c", ("c1", "c2")),
        IdentityInfo("4.4", Trust.PAPER_DERIVED, ("q", "z", "alpha", "c1", "c2"),
                     "bilateral expansion of phi0,c", ("c1", "c2")),
        IdentityInfo("4.5", Trust.PAPER_DERIVED, ("q", "z", "alpha", "c1", "c2"),
                     "bilateral expansion of phi1,c", ("c1", "c2")),
        IdentityInfo("5.1", Trust.ESTABLISHED, ("q", "z", "a1", "a2", "b1", "b2"),
                     "2psi2 as two 2phi1 series (c_j = b_j)", ("b1", "b2")),
        IdentityInfo("5.2", Trust.PAPER_DERIVED, ("q", "z", "alpha", "c1", "c2"),
                     "psi0,c as 2phi1-type series", ("b1", "b2")),
        IdentityInfo("5.3", Trust.PAPER_DERIVED, ("q", "z", "alpha", "c1", "c2"),
                     "psi1,c as 2phi1-type series", ("b1", "b2")),
        IdentityInfo("6.1", Trust.ESTABLISHED, ("q", "z", "a1", "a2", "b1", "b2"),
                     "2psi2 as two 2phi1 series in b1 b2/(a1 a2 z) (c_j = q a_j)", ("a1", "a2")),
        IdentityInfo("6.2", Trust.PAPER_DERIVED, ("q", "z", "alpha"),
                     "phi0,c as 2phi1-type series", ("a1", "a2")),
        IdentityInfo("6.3", Trust.PAPER_DERIVED, ("q", "z", "alpha"),
                     "phi1,c as 2phi1-type series", ("a1", "a2")),
        IdentityInfo("7.1", Trust.ESTABLISHED, ("q", "lam", "beta"),
                     "series ratio equals the lambda q^k + beta continued fraction"),
        IdentityInfo("7.4", Trust.PAPER_DERIVED, ("q", "z", "alpha", "c1", "c2"),
                     "psi0,c through S, T and the continued fraction"),
        IdentityInfo("7.5", Trust.PAPER_DERIVED, ("q", "z", "alpha", "c1", "c2"),
                     "psi1,c through S1, T1 and the continued fraction"),
    ]
}


def identity_info(identity: str) -> IdentityInfo:
    try:
        return CATALOG[str(identity)]
    except KeyError:
        raise UsageError(f"unknown identity {identity!r}; known: {', '.join(CATALOG)}") from None


def catalog_lines() -> list[str]:
    out = []
    for info in CATALOG.values():
        swap = f" idem({info.swap[0]};{info.swap[1]})" if info.swap else ""
        out.append(f"{info.id:<4} {info.trust.value:<12} "
                   f"params={','.join(info.params)}{swap}  {info.summary}")
    return out


def _finite(x) -> bool:
    return x is not None and mpmath.isfinite(x)


@dataclass
class ResidualRecord:
    identity: str
    point: Any
    lhs: Any
    rhs: Any
    abs_residual: Any
    rel_residual: Any
    lhs_status: Status
    rhs_status: Status
    verdict: Verdict
    variant: str = "standard"
    note: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def trust(self) -> Trust:
        return CATALOG[self.identity].trust

    def to_json(self, digits: int | None = None) -> dict:
        def num(x):
            return None if x is None else format_hp(x, digits)

        out = {
            "type": "record",
            "identity": self.identity,
            "trust": self.trust.value,
            "variant": self.variant,
            "point": {k: format_hp(v, digits) for k, v in self.point.as_dict().items()},
            "lhs": num(self.lhs),
            "rhs": num(self.rhs),
            "abs_residual": num(self.abs_residual),
            "rel_residual": num(self.rel_residual),
            "lhs_status": self.lhs_status.value,
            "rhs_status": self.rhs_status.value,
            "verdict": self.verdict.value,
        }
        if self.note:
            out["note"] = self.note
        if self.extras:
            out["extras"] = {k: (v if isinstance(v, (str, int, bool)) or v is None else format_hp(v, digits))
                             for k, v in self.extras.items()}
        return out


def residual(lhs, rhs):
    a = abs(lhs - rhs)
    return a, a / max(abs(lhs), abs(rhs), mpmath.mpf(RESIDUAL_FLOOR))


def make_record(identity: str, point, lhs: SeriesResult, rhs: SeriesResult,
                assert_tol=DEFAULT_ASSERT_TOL, variant: str = "standard",
                extras: dict | None = None, note: str = "") -> ResidualRecord:
    """Build a record; non-finite values or unconverged sides give Singular."""
    info = identity_info(identity)
    lv, rv = lhs.value, rhs.value
    if not (_finite(lv) and _finite(rv)):
        return ResidualRecord(identity, point, lv if _finite(lv) else None, rv if _finite(rv) else None,
                              None, None, lhs.status if _finite(lv) else Status.SINGULAR,
                              rhs.status if _finite(rv) else Status.SINGULAR, Verdict.SINGULAR,
                              variant, note or "non-finite value", dict(extras or {}))
    a, r = residual(lv, rv)
    if not (lhs.converged and rhs.converged):
        verdict = Verdict.SINGULAR
        note = note or f"unconverged: lhs {lhs.status.value}, rhs {rhs.status.value}"
    elif info.trust is Trust.ESTABLISHED:
        verdict = Verdict.PASS if r < assert_tol else Verdict.FAIL
    else:
        verdict = Verdict.REPORT
    return ResidualRecord(identity, point, lv, rv, a, r, lhs.status, rhs.status, verdict,
                          variant, note, dict(extras or {}))


def singular_record(identity: str, point, reason: str, variant: str = "standard") -> ResidualRecord:
    identity_info(identity)
    return ResidualRecord(identity, point, None, None, None, None, Status.SINGULAR, Status.SINGULAR,
                          Verdict.SINGULAR, variant, reason)
