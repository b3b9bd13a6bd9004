"""Geometric primitives.

Predicates (orientation, in_circle, encroachment of a segment) are exact.
Constructions (centers, radii) are plain floating point; the independence
tests built on them use a relative guard and resolve near-ties as
"independent".
"""

from __future__ import annotations

import math
from enum import IntEnum
from typing import NamedTuple

from . import kernels
from .errors import DegenerateSegment, DegenerateTriangle

GUARD = 1e-12
SQRT2 = math.sqrt(2.0)


class Point(NamedTuple):
    x: float
    y: float


class Circle(NamedTuple):
    center: Point
    radius: float


class Orientation(IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


def orientation(a, b, c) -> Orientation:
    return Orientation(kernels.orient2d(a[0], a[1], b[0], b[1], c[0], c[1]))


def in_circle(a, b, c, p) -> Orientation:
    """Position of p relative to the circumcircle of abc.

    POSITIVE means strictly inside. A clockwise abc is accepted and
    handled by flipping the sign; a collinear abc raises.
    """
    o = kernels.orient2d(a[0], a[1], b[0], b[1], c[0], c[1])
    if o == 0:
        raise DegenerateTriangle(f"collinear triangle {a}, {b}, {c}")
    s = kernels.incircle(a[0], a[1], b[0], b[1], c[0], c[1], p[0], p[1])
    return Orientation(s * o)


def circumcircle(a, b, c) -> Circle:
    if kernels.orient2d(a[0], a[1], b[0], b[1], c[0], c[1]) == 0:
        raise DegenerateTriangle(f"collinear triangle {a}, {b}, {c}")
    # anchor at the lexicographically smallest vertex so the result is
    # independent of the argument order
    pa, pb, pc = sorted((tuple(a), tuple(b), tuple(c)))
    ux, uy, r2 = kernels.circumcenter(pa[0], pa[1], pb[0], pb[1], pc[0], pc[1])
    return Circle(Point(ux, uy), math.sqrt(r2))


def diametral_circle(p, q) -> Circle:
    if p[0] == q[0] and p[1] == q[1]:
        raise DegenerateSegment(f"zero-length segment at {p}")
    cx = (p[0] + q[0]) / 2.0
    cy = (p[1] + q[1]) / 2.0
    return Circle(Point(cx, cy), math.hypot(q[0] - p[0], q[1] - p[1]) / 2.0)


def encroaches(p, seg_diametral: Circle) -> bool:
    """Strict-interior test against an already constructed circle."""
    c, r = seg_diametral
    return (p[0] - c[0]) ** 2 + (p[1] - c[1]) ** 2 < r * r


def encroaches_segment(p, a, b) -> bool:
    """Exact: p lies strictly inside the diametral circle of segment ab."""
    return kernels.diametral(a[0], a[1], b[0], b[1], p[0], p[1]) < 0


def _dist2(p, q):
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def circles_conflict(c1: Circle, c2: Circle, dist2=None) -> bool:
    """Each circle strictly contains the other's center.

    ``dist2`` overrides the squared center distance (torus metric).
    """
    d2 = _dist2(c1[0], c2[0]) if dist2 is None else dist2
    g = 1.0 - GUARD
    return d2 < c1[1] * c1[1] * g and d2 < c2[1] * c2[1] * g


def circumcenter_diametral_conflict(c: Circle, d: Circle, dist2=None) -> bool:
    d2 = _dist2(c[0], d[0]) if dist2 is None else dist2
    g = 1.0 - GUARD
    rc2 = c[1] * c[1]
    return d2 < rc2 * g and rc2 < 2.0 * d[1] * d[1] * g


def radius_edge_ratio(a, b, c) -> float:
    r = circumcircle(a, b, c).radius
    shortest = min(math.dist(a, b), math.dist(b, c), math.dist(c, a))
    return r / shortest
