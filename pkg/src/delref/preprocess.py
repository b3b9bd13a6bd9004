"""Boundary preprocessing: strong conformity and feature conformity."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .domain import Pslg, convex_hull, local_feature_size, split_segment
from .errors import ConfigError, PreprocessDiverged

_REL = 1e-12


@dataclass
class PreprocessReport:
    iterations: int
    segments_split: int
    samples: list = field(default_factory=list)


def iteration_cap(d: Pslg) -> int:
    s_min = min(local_feature_size(d, v) for v in d.vertices)
    return 4 * math.ceil(math.log2(d.diameter / s_min)) + 16


def boundary_violations(d: Pslg) -> list:
    """Ids of segments whose closed diametral disk meets a non-incident feature."""
    f = d.features
    nv = f.nv
    out = []
    for k, sid in enumerate(d.seg_ids):
        i, j = d.segments[k]
        a, b = d.vertices[i], d.vertices[j]
        mx, my = (a.x + b.x) / 2.0, (a.y + b.y) / 2.0
        r = math.hypot(b.x - a.x, b.y - a.y) / 2.0
        dist = f.distances(mx, my)
        mask = np.ones(len(dist), dtype=bool)
        mask[nv + k] = False
        mask[list(f.incident[nv + k])] = False
        if (dist[mask] <= r * (1.0 + _REL)).any():
            out.append(sid)
    return out


def feature_violations(d: Pslg, alpha: float) -> list:
    """Ids of segments longer than alpha times lfs at their midpoint."""
    out = []
    for k, sid in enumerate(d.seg_ids):
        i, j = d.segments[k]
        a, b = d.vertices[i], d.vertices[j]
        m = ((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)
        if math.hypot(b.x - a.x, b.y - a.y) > alpha * local_feature_size(d, m):
            out.append(sid)
    return out


def is_strongly_conforming(d: Pslg) -> bool:
    return not boundary_violations(d)


def is_feature_conforming(d: Pslg, alpha: float = 3.0) -> bool:
    return not boundary_violations(d) and not feature_violations(d, alpha)


def _split_all(d, sids):
    for sid in sorted(sids):
        d, _ = split_segment(d, sid)
    return d


def _iterate(d, find, cap):
    it = 0
    splits = 0
    while True:
        bad = find(d)
        if not bad:
            return d, it, splits
        if it >= cap:
            raise PreprocessDiverged(f"no fixed point after {cap} iterations")
        d = _split_all(d, bad)
        splits += len(bad)
        it += 1


def sample_points(d: Pslg, n: int = 1000, seed: int = 0) -> list:
    """n deterministic pseudo-random points inside the convex hull of d."""
    rng = random.Random(seed)
    V = d.vertices
    hull = [V[k] for k in convex_hull(list(V))]
    xs = [p.x for p in hull]
    ys = [p.y for p in hull]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    edges = list(zip(hull, hull[1:] + hull[:1]))
    out = []
    while len(out) < n:
        x = rng.uniform(x0, x1)
        y = rng.uniform(y0, y1)
        if all(kernels.orient2d(a.x, a.y, b.x, b.y, x, y) >= 0 for a, b in edges):
            out.append((x, y))
    return out


def preprocess_boundary(d: Pslg, *, samples: int = 1000, seed: int = 0):
    """Split segments until the domain is strongly conforming.

    Every round splits all offending segments at once. Returns the new
    domain and a report with lfs samples taken before and after.
    """
    out, it, splits = _iterate(d, boundary_violations, iteration_cap(d))
    pts = sample_points(d, samples, seed) if samples else []
    rep = PreprocessReport(it, splits)
    for p in pts:
        rep.samples.append((p, local_feature_size(d, p), local_feature_size(out, p)))
    return out, rep


def preprocess_feature_conforming(d: Pslg, alpha: float = 3.0) -> Pslg:
    """Additionally split segments longer than alpha * lfs(midpoint)."""
    if not alpha > 2:
        raise ConfigError(f"alpha must exceed 2, got {alpha}")
    # alpha splits keep strong conformity for admissible inputs, but check both anyway
    out, _, _ = _iterate(
        d, lambda e: sorted(set(feature_violations(e, alpha)) | set(boundary_violations(e))),
        iteration_cap(d))
    return out


__all__ = ["PreprocessReport", "boundary_violations", "feature_violations",
           "is_feature_conforming", "is_strongly_conforming", "iteration_cap",
           "preprocess_boundary", "preprocess_feature_conforming", "sample_points"]
