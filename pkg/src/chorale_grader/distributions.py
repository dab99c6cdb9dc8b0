"""Normalized probability mass over an ordered numeric or categorical support."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

NUMERIC = "numeric"
CATEGORICAL = "categorical"

SupportValue = Union[Fraction, str]

_SUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Distribution:
    """Probability mass function with an explicit support kind.

    Numeric supports are exact rationals sorted ascending; categorical
    supports are strings sorted lexicographically. Masses are floats summing
    to 1 within 1e-12. The empty distribution is legal (used for the
    parallel-error feature of an error-free chorale).
    """

    kind: str
    entries: tuple[tuple[SupportValue, float], ...]

    def __post_init__(self) -> None:
        if self.kind not in (NUMERIC, CATEGORICAL):
            raise ValueError(f"bad support kind {self.kind!r}")
        values = [v for v, _ in self.entries]
        if self.kind == NUMERIC:
            if not all(isinstance(v, Fraction) for v in values):
                raise ValueError("numeric support values must be Fractions")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValueError("numeric support must be strictly ascending")
        else:
            if not all(isinstance(v, str) for v in values):
                raise ValueError("categorical support values must be strings")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValueError("categorical support must be strictly ascending")
        if any(m < 0.0 or m > 1.0 for _, m in self.entries):
            raise ValueError("masses must lie in [0, 1]")
        if self.entries:
            total = sum(m for _, m in self.entries)
            if abs(total - 1.0) > _SUM_TOLERANCE:
                raise ValueError(f"masses sum to {total!r}, not 1")

    @classmethod
    def from_counts(cls, kind: str, counts: Mapping[SupportValue, int]) -> "Distribution":
        """Normalize raw observation counts into a distribution.

        Zero counts are dropped; float masses come from exact integer
        division count/total, so equal inputs give bit-identical masses.
        """
        positive = {v: c for v, c in counts.items() if c}
        if any(c < 0 for c in positive.values()):
            raise ValueError("negative counts")
        total = sum(positive.values())
        entries = tuple((v, c / total) for v, c in sorted(positive.items()))
        return cls(kind, entries)

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def values(self) -> tuple[SupportValue, ...]:
        return tuple(v for v, _ in self.entries)

    def mass(self, value: SupportValue) -> float:
        for v, m in self.entries:
            if v == value:
                return m
        return 0.0

    def as_dict(self) -> dict[SupportValue, float]:
        return dict(self.entries)
