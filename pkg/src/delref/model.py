"""Value types shared by the refinement drivers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError
from .geometry import Circle, Point

SQRT2 = math.sqrt(2.0)
KINDS = ("C", "B", "D_T", "D_B")


@dataclass(frozen=True)
class QualityRule:
    """``ruppert``: circumradius / shortest side > beta is poor.
    ``chew``: circumradius / shortest mesh edge > beta is poor."""

    kind: str = "ruppert"
    beta: float = SQRT2

    def __post_init__(self):
        if self.kind not in ("ruppert", "chew"):
            raise ConfigError(f"unknown quality rule {self.kind!r}")
        if not self.beta >= SQRT2 * (1.0 - 1e-7):
            raise ConfigError(f"beta must be at least sqrt(2), got {self.beta}")

    @property
    def beta2(self) -> Fraction:
        # values this close to sqrt(2) mean sqrt(2) itself
        if abs(self.beta - SQRT2) <= 1e-7 * SQRT2:
            return Fraction(2)
        return Fraction(self.beta) ** 2


@dataclass(frozen=True)
class Candidate:
    kind: str
    x: float
    y: float
    radius: float
    source: tuple
    birth: int = 0

    @property
    def location(self) -> Point:
        return Point(self.x, self.y)

    @property
    def circle(self) -> Circle:
        return Circle(Point(self.x, self.y), self.radius)

    @property
    def is_circumcenter(self) -> bool:
        return self.kind in ("B", "C")

    def sort_key(self):
        return (-self.radius, self.x, self.y, self.kind)

    def to_json(self):
        return [self.kind, self.x, self.y, self.radius,
                [list(p) for p in self.source], self.birth]

    @classmethod
    def from_json(cls, v):
        kind, x, y, r, src, birth = v
        return cls(kind, x, y, r, tuple(tuple(p) for p in src), birth)


@dataclass(frozen=True)
class LogEntry:
    candidate: Candidate
    iteration: int
