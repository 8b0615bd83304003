"""Convergence bookkeeping: the status enum and the SeriesResult value type."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import mpmath


class Status(enum.Enum):
    CONVERGED = "Converged"
    TRUNCATED = "Truncated"
    SINGULAR = "Singular"

    @property
    def rank(self) -> int:
        return _RANK[self]

    @staticmethod
    def worst(*statuses: "Status") -> "Status":
        return max(statuses, key=lambda s: s.rank, default=Status.CONVERGED)


_RANK = {Status.CONVERGED: 0, Status.TRUNCATED: 1, Status.SINGULAR: 2}


@dataclass(frozen=True)
class SeriesResult:
    """Value of a truncated sum or product together with how it was obtained.

    ``tail_estimate`` is relative to the magnitude of ``value`` (or to 1 when
    the value is tiny). Arithmetic between results propagates the worst status
    and the largest tail, so composite expressions stay honest.
    """

    value: Any
    terms_used: int = 0
    tail_estimate: Any = 0
    status: Status = Status.CONVERGED
    positive: "SeriesResult | None" = field(default=None, compare=False)
    negative: "SeriesResult | None" = field(default=None, compare=False)

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def require(self) -> "SeriesResult":
        """Return self, or raise NonConvergence when not converged."""
        if self.status is not Status.CONVERGED:
            from .errors import NonConvergence

            raise NonConvergence(
                f"series not converged after {self.terms_used} terms "
                f"(status {self.status.value}, tail {mpmath.nstr(self.tail_estimate, 5)})"
            )
        return self

    def _combine(self, other, value) -> "SeriesResult":
        if isinstance(other, SeriesResult):
            return SeriesResult(
                value,
                self.terms_used + other.terms_used,
                max(self.tail_estimate, other.tail_estimate),
                Status.worst(self.status, other.status),
            )
        return SeriesResult(value, self.terms_used, self.tail_estimate, self.status)

    def __mul__(self, other):
        return self._combine(other, self.value * _val(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._combine(other, self.value / _val(other))

    def __rtruediv__(self, other):
        return self._combine(other, _val(other) / self.value)

    def __add__(self, other):
        return self._combine(other, self.value + _val(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, self.value - _val(other))

    def __rsub__(self, other):
        return self._combine(other, _val(other) - self.value)

    def __neg__(self):
        return SeriesResult(-self.value, self.terms_used, self.tail_estimate, self.status)


def _val(x):
    return x.value if isinstance(x, SeriesResult) else x


def exact(value) -> SeriesResult:
    """Wrap a closed-form value as a converged result."""
    return SeriesResult(value)
