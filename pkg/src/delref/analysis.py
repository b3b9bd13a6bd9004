"""Mesh quality metrics, trace checkers and round-bound reports."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .domain import Pslg, local_feature_size
from .engine import exact_len2, exact_r2
from .errors import EmptyMesh
from .mis import radius_class
from .model import QualityRule

REL_TOL = 1e-9
MIN_ANGLE_SQRT2 = math.degrees(math.asin(1.0 / (2.0 * math.sqrt(2.0))))


@dataclass
class QualityReport:
    triangle_count: int
    min_angle: float
    max_ratio: float
    shortest_edge: float
    longest_edge: float
    quasi_uniformity: float
    lfs_ratio_min: float | None = None
    lfs_ratio_max: float | None = None


@dataclass
class BoundReport:
    algorithm: str
    rounds_used: int
    ceiling: int | None
    L: float
    s: float
    radius_series: list = field(default_factory=list)

    @property
    def within(self) -> bool:
        return self.ceiling is None or self.rounds_used <= self.ceiling


@dataclass
class EdgeLfsProfile:
    ratios: list
    histogram: list
    bin_edges: list
    min: float
    max: float


def _angles(c):
    pts = [(c[0], c[1]), (c[2], c[3]), (c[4], c[5])]
    out = []
    for k in range(3):
        p, q, r = pts[k], pts[(k + 1) % 3], pts[(k + 2) % 3]
        ux, uy = q[0] - p[0], q[1] - p[1]
        wx, wy = r[0] - p[0], r[1] - p[1]
        cos = (ux * wx + uy * wy) / (math.hypot(ux, uy) * math.hypot(wx, wy))
        out.append(math.degrees(math.acos(max(-1.0, min(1.0, cos)))))
    return out


def _ratio(c):
    ax, ay, bx, by, cx, cy = c
    ab = math.hypot(bx - ax, by - ay)
    bc = math.hypot(cx - bx, cy - by)
    ca = math.hypot(ax - cx, ay - cy)
    area2 = abs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))
    return ab * bc * ca / (2.0 * area2) / min(ab, bc, ca)


def quality_report(m, domain: Pslg | None = None) -> QualityReport:
    tris = m.triangle_coords()
    if not tris:
        raise EmptyMesh("mesh has no triangles")
    min_angle = min(min(_angles(c)) for c in tris)
    max_ratio = max(_ratio(c) for c in tris)
    lengths = [math.hypot(x1 - x0, y1 - y0) for x0, y0, x1, y1 in m.edge_coords()]
    lo, hi = min(lengths), max(lengths)
    rep = QualityReport(len(tris), min_angle, max_ratio, lo, hi, hi / lo)
    if domain is not None:
        prof = edge_lfs_profile(m, domain)
        rep.lfs_ratio_min, rep.lfs_ratio_max = prof.min, prof.max
    return rep


def poor_triangles_exact(m, beta: float = math.sqrt(2.0)) -> list:
    """Indices of triangles whose radius-edge ratio exceeds beta, exactly."""
    beta2 = QualityRule("ruppert", beta).beta2
    out = []
    for k, c in enumerate(m.triangle_coords()):
        pts = [(c[0], c[1]), (c[2], c[3]), (c[4], c[5])]
        l2 = min(exact_len2(pts[i], pts[(i + 1) % 3]) for i in range(3))
        if exact_r2(c) > beta2 * l2:
            out.append(k)
    return out


def edge_lfs_profile(m, domain: Pslg, bins: int = 10) -> EdgeLfsProfile:
    edges = m.edge_coords()
    if not edges:
        raise EmptyMesh("mesh has no edges")
    ratios = [math.hypot(x1 - x0, y1 - y0) / local_feature_size(domain, ((x0 + x1) / 2, (y0 + y1) / 2))
              for x0, y0, x1, y1 in edges]
    hist, bin_edges = np.histogram(ratios, bins=bins)
    return EdgeLfsProfile(ratios, hist.tolist(), bin_edges.tolist(), min(ratios), max(ratios))


# trace checkers ---------------------------------------------------------------

def check_conflict_lemma(trace) -> list:
    """Recorded conflict pairs violating r_b/2 < r_a < 2 r_b."""
    out = []
    for rnd in trace.rounds:
        for ra, rb in rnd.conflicts:
            if not (ra < 2.0 * rb and rb < 2.0 * ra):
                out.append((rnd.index, ra, rb))
    return out


def check_class_locality(trace) -> list:
    """Recorded conflict pairs whose radius classes differ by more than one."""
    out = []
    for rnd in trace.rounds:
        for ra, rb in rnd.conflicts:
            L = max(trace.L, ra, rb)
            if abs(radius_class(ra, L) - radius_class(rb, L)) > 1:
                out.append((rnd.index, ra, rb))
    return out


def check_shrinkage(trace, window: int = 98, factor: float = 0.75) -> list:
    """Indices k >= window with r_k > factor * r_(k - window).

    Accepts a trace or a plain radius series (index 0 = before any round).
    """
    series = trace.radius_series() if hasattr(trace, "radius_series") else list(trace)
    return [k for k in range(window, len(series))
            if series[k] > factor * series[k - window]]


def check_encroach_ratio(trace) -> list:
    """Encroachment events violating r_d >= r_c / sqrt(2)."""
    out = []
    for rnd in trace.rounds:
        for rc, rd in rnd.encroach_events:
            if Fraction(rd) ** 2 * 2 < Fraction(rc) ** 2:
                out.append((rnd.index, rc, rd))
    return out


def check_lfs_ratio(omega: Pslg, omega2: Pslg, samples, tol: float = REL_TOL) -> list:
    """Sample points violating lfs/3 <= lfs' <= lfs (relative tolerance)."""
    out = []
    for p in samples:
        a = local_feature_size(omega, p)
        b = local_feature_size(omega2, p)
        if not (a / 3.0 * (1 - tol) <= b <= a * (1 + tol)):
            out.append((tuple(p), a, b))
    return out


def max_splits_per_class(trace) -> int:
    """Largest number of splits of one input segment within one outer class."""
    counts: dict = {}
    for rnd in trace.rounds:
        cls = tuple(rnd.label[:2])
        for o in rnd.split_origins:
            counts[(cls, o)] = counts.get((cls, o), 0) + 1
    return max(counts.values(), default=0)


# round bounds -------------------------------------------------------------------

def chew_pps_ceiling(L: float, s: float) -> int:
    return math.ceil(98 * math.log(L / s) / math.log(4 / 3))


def ruppert_ceiling(L: float, s: float) -> int:
    outer = math.ceil(math.log(L / s) / math.log(math.sqrt(2.0)))
    return outer * (81 + 98 * math.ceil(math.log(L / s) / math.log(4 / 3)))


def bound_report(trace) -> BoundReport:
    ceiling = None
    if trace.s > 0 and trace.L > trace.s:
        if trace.algorithm == "par-chew" and trace.meta.get("periodic", False):
            ceiling = chew_pps_ceiling(trace.L, trace.s)
        elif trace.algorithm == "par-ruppert":
            ceiling = ruppert_ceiling(trace.L, trace.s)
    return BoundReport(trace.algorithm, len(trace.rounds), ceiling, trace.L, trace.s,
                       trace.radius_series())


def fit_rounds(xs, rounds):
    """Least-squares fit rounds ~ c1 * x + c2; returns (c1, c2, relative residuals)."""
    X = np.column_stack([np.asarray(xs, dtype=float), np.ones(len(xs))])
    y = np.asarray(rounds, dtype=float)
    (c1, c2), *_ = np.linalg.lstsq(X, y, rcond=None)
    return float(c1), float(c2), ((X @ [c1, c2] - y) / y).tolist()


def r_squared(xs, ys) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    c = np.polyfit(x, y, 1)
    res = ((np.polyval(c, x) - y) ** 2).sum()
    tot = ((y - y.mean()) ** 2).sum()
    return 1.0 - res / tot if tot else 1.0


# serialization ------------------------------------------------------------------

def to_json(report) -> dict:
    doc = asdict(report)
    doc["type"] = type(report).__name__
    if isinstance(report, BoundReport):
        doc["within"] = report.within
    return doc


def to_text(report) -> str:
    """One ``key=value`` line per scalar field; lists are JSON-encoded."""
    lines = []
    for k, v in to_json(report).items():
        if isinstance(v, float):
            v = repr(v)
        elif isinstance(v, (list, dict)):
            v = json.dumps(v)
        lines.append(f"{k}={v}")
    return "\n".join(lines) + "\n"


__all__ = ["BoundReport", "EdgeLfsProfile", "MIN_ANGLE_SQRT2", "QualityReport", "bound_report",
           "check_class_locality", "check_conflict_lemma", "check_encroach_ratio",
           "check_lfs_ratio", "check_shrinkage", "chew_pps_ceiling", "edge_lfs_profile",
           "fit_rounds", "max_splits_per_class", "poor_triangles_exact", "quality_report",
           "r_squared", "ruppert_ceiling", "to_json", "to_text"]
