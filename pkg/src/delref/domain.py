"""Input domains: planar straight-line graphs and periodic point sets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import (DegenerateInput, DuplicateVertex, InvalidDomain,
                     NoFeaturePair, NoSuchSegment)
from .geometry import Point

ANGLE_TOL = 1e-9
PERIODIC_GRID = 2.0 ** 40


def snap_unit(v: float) -> float:
    """Round a coordinate in [0, 1) to the periodic dyadic grid."""
    s = round(v * PERIODIC_GRID) / PERIODIC_GRID
    return 0.0 if s >= 1.0 else s


def wrap_unit(v: float) -> float:
    return snap_unit(v - math.floor(v))


@dataclass(frozen=True)
class Pslg:
    """Immutable PSLG. Segment ids are persistent across splits."""

    vertices: tuple
    segments: tuple
    seg_ids: tuple
    provenance: tuple
    next_id: int

    @classmethod
    def create(cls, vertices, segments) -> "Pslg":
        verts = tuple(Point(float(x), float(y)) for x, y in vertices)
        for x, y in verts:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise InvalidDomain(f"non-finite vertex ({x}, {y})")
        segs = []
        for k, (i, j) in enumerate(segments):
            i, j = int(i), int(j)
            if not (0 <= i < len(verts) and 0 <= j < len(verts)):
                raise InvalidDomain(f"segment {k} references a missing vertex")
            if verts[i] == verts[j]:
                raise InvalidDomain(f"segment {k} has coincident endpoints")
            segs.append((i, j))
        n = len(segs)
        return cls(verts, tuple(segs), tuple(range(n)), tuple(range(n)), n)

    def _position(self, sid: int) -> int:
        pos = self._id_pos.get(sid)
        if pos is None:
            raise NoSuchSegment(f"no live segment with id {sid}")
        return pos

    @cached_property
    def _id_pos(self):
        return {sid: k for k, sid in enumerate(self.seg_ids)}

    def segment(self, sid: int):
        return self.segments[self._position(sid)]

    def segment_points(self, sid: int):
        i, j = self.segment(sid)
        return self.vertices[i], self.vertices[j]

    def origin(self, sid: int) -> int:
        return self.provenance[self._position(sid)]

    @cached_property
    def diameter(self) -> float:
        return diameter(self.vertices)

    @cached_property
    def features(self) -> "_Features":
        return _Features(self)


def split_segment(d: Pslg, sid: int):
    """Split segment ``sid`` at its midpoint; returns (new Pslg, vertex id)."""
    pos = d._position(sid)
    i, j = d.segments[pos]
    a, b = d.vertices[i], d.vertices[j]
    m = Point((a.x + b.x) / 2.0, (a.y + b.y) / 2.0)
    vid = len(d.vertices)
    segs = d.segments[:pos] + ((i, vid), (vid, j)) + d.segments[pos + 1:]
    ids = d.seg_ids[:pos] + (d.next_id, d.next_id + 1) + d.seg_ids[pos + 1:]
    origin = d.provenance[pos]
    prov = d.provenance[:pos] + (origin, origin) + d.provenance[pos + 1:]
    return Pslg(d.vertices + (m,), segs, ids, prov, d.next_id + 2), vid


class _Features:
    """Vertex and segment features of a PSLG with their incidence sets."""

    def __init__(self, d: Pslg):
        nv = len(d.vertices)
        self.nv = nv
        self.verts = np.array(d.vertices, dtype=float).reshape(-1, 2)
        segs = np.array(d.segments, dtype=int).reshape(-1, 2)
        self.seg_a = self.verts[segs[:, 0]]
        self.seg_b = self.verts[segs[:, 1]]
        self.segs = segs
        by_vertex = [[] for _ in range(nv)]
        for k, (i, j) in enumerate(d.segments):
            by_vertex[i].append(nv + k)
            by_vertex[j].append(nv + k)
        inc = [frozenset(by_vertex[v]) for v in range(nv)]
        for k, (i, j) in enumerate(d.segments):
            inc.append(frozenset({i, j, *by_vertex[i], *by_vertex[j]}) - {nv + k})
        self.incident = inc

    def distances(self, x, y) -> np.ndarray:
        dv = np.hypot(self.verts[:, 0] - x, self.verts[:, 1] - y)
        if len(self.segs) == 0:
            return dv
        return np.concatenate([dv, point_segment_distance(x, y, self.seg_a, self.seg_b)])

    def lfs(self, x, y) -> float:
        dist = self.distances(x, y)
        order = np.argsort(dist, kind="stable")
        inc = self.incident
        seen = []
        for j in order.tolist():
            inc_j = inc[j]
            for i in seen:
                if i not in inc_j:
                    return float(dist[j])
            seen.append(j)
        raise NoFeaturePair("fewer than two mutually non-incident features")


def point_segment_distance(x, y, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from (x, y) to each closed segment a[k]-b[k]."""
    ab = b - a
    ap = np.array([x, y]) - a
    len2 = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", ap, ab) / len2, 0.0, 1.0)
    proj = a + ab * t[:, None]
    return np.hypot(proj[:, 0] - x, proj[:, 1] - y)


def local_feature_size(d: Pslg, x) -> float:
    """Smallest radius of a disk at x meeting two mutually non-incident features."""
    return d.features.lfs(float(x[0]), float(x[1]))


def min_feature_separation(d: Pslg) -> float:
    """Half the smallest distance between two mutually non-incident features.

    This is the infimum of lfs over the plane.
    """
    f = d.features
    best = math.inf
    nv = f.nv
    for v in range(nv):
        dist = f.distances(*f.verts[v])
        inc = f.incident[v]
        for j in np.argsort(dist, kind="stable").tolist():
            if j != v and j not in inc:
                best = min(best, float(dist[j]))
                break
    if best == math.inf:
        raise NoFeaturePair("fewer than two mutually non-incident features")
    # the closest pair of features always involves a vertex
    return best / 2.0


def diameter(points) -> float:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 2:
        return 0.0
    hull = pts[convex_hull(pts.tolist())] if len(pts) > 3 else pts
    diff = hull[:, None, :] - hull[None, :, :]
    return float(np.sqrt((diff ** 2).sum(axis=2).max()))


def convex_hull(points) -> list:
    """Indices of the convex hull in counterclockwise order.

    Points lying on hull edges are kept. Input must not be all collinear.
    """
    order = sorted(range(len(points)), key=lambda k: (points[k][0], points[k][1]))

    def chain(idx):
        h = []
        for k in idx:
            p = points[k]
            while len(h) >= 2:
                a, b = points[h[-2]], points[h[-1]]
                if kernels.orient2d(a[0], a[1], b[0], b[1], p[0], p[1]) < 0:
                    h.pop()
                else:
                    break
            h.append(k)
        return h

    lower = chain(order)
    upper = chain(order[::-1])
    return lower[:-1] + upper[:-1]


def torus_displacement(p, q):
    """Shortest displacement from p to a lattice translate of q."""
    best = None
    for vx in (-1, 0, 1):
        for vy in (-1, 0, 1):
            dx = q[0] + vx - p[0]
            dy = q[1] + vy - p[1]
            d2 = dx * dx + dy * dy
            if best is None or d2 < best[0]:
                best = (d2, dx, dy)
    d2, dx, dy = best
    return (dx, dy), math.sqrt(d2)


def torus_dist2(ax, ay, bx, by) -> float:
    dx = abs(ax - bx)
    dy = abs(ay - by)
    dx = min(dx, 1.0 - dx)
    dy = min(dy, 1.0 - dy)
    return dx * dx + dy * dy


@dataclass(frozen=True)
class PeriodicPointSet:
    """Points on the unit flat torus, snapped to a 2**-40 grid."""

    points: tuple

    @classmethod
    def create(cls, points) -> "PeriodicPointSet":
        pts = []
        for x, y in points:
            x, y = float(x), float(y)
            if not (0.0 <= x < 1.0 and 0.0 <= y < 1.0):
                raise InvalidDomain(f"point ({x}, {y}) outside [0,1)^2")
            pts.append(Point(snap_unit(x), snap_unit(y)))
        if not pts:
            raise DegenerateInput("empty periodic point set")
        if len(set(pts)) != len(pts):
            raise DuplicateVertex("duplicate periodic points (after snapping)")
        return cls(tuple(pts))

    @cached_property
    def diameter(self) -> float:
        return diameter(self.points)


@dataclass
class ValidationReport:
    crossings: list = field(default_factory=list)
    angles: list = field(default_factory=list)
    duplicates: list = field(default_factory=list)
    hull: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.crossings or self.angles or self.duplicates or self.hull)

    def violations(self) -> list:
        out = [("crossing",) + tuple(v) for v in self.crossings]
        out += [("angle",) + tuple(v) for v in self.angles]
        out += [("duplicate",) + tuple(v) for v in self.duplicates]
        out += [("hull",) + tuple(v) for v in self.hull]
        return out


def _orient(p, q, r):
    return kernels.orient2d(p[0], p[1], q[0], q[1], r[0], r[1])


def _strictly_between(p, a, b):
    """p collinear with ab is strictly inside the segment."""
    return kernels.diametral(a[0], a[1], b[0], b[1], p[0], p[1]) < 0


def validate_pslg(d: Pslg) -> ValidationReport:
    rep = ValidationReport()
    V = d.vertices
    seen = {}
    for k, p in enumerate(V):
        if p in seen:
            rep.duplicates.append((seen[p], k))
        else:
            seen[p] = k
    S = d.segments
    if S:
        arr = np.array([(V[i].x, V[i].y, V[j].x, V[j].y) for i, j in S])
        lo = np.minimum(arr[:, :2], arr[:, 2:])
        hi = np.maximum(arr[:, :2], arr[:, 2:])
        for k, (i, j) in enumerate(S):
            near = np.nonzero((lo[k + 1:] <= hi[k]).all(axis=1)
                              & (hi[k + 1:] >= lo[k]).all(axis=1))[0] + k + 1
            for m in near.tolist():
                if _segments_clash(V, S[k], S[m]):
                    rep.crossings.append((d.seg_ids[k], d.seg_ids[m]))
        verts = np.array(V, dtype=float)
        for k, (i, j) in enumerate(S):
            inside = np.nonzero((verts >= lo[k]).all(axis=1) & (verts <= hi[k]).all(axis=1))[0]
            for v in inside.tolist():
                if v in (i, j) or V[v] in (V[i], V[j]):
                    continue
                if _orient(V[i], V[j], V[v]) == 0 and _strictly_between(V[v], V[i], V[j]):
                    rep.crossings.append((d.seg_ids[k], ("vertex", v)))
    around = {}
    for k, (i, j) in enumerate(S):
        around.setdefault(i, []).append((j, k))
        around.setdefault(j, []).append((i, k))
    for v, nbrs in sorted(around.items()):
        p = V[v]
        for x in range(len(nbrs)):
            for y in range(x + 1, len(nbrs)):
                qa, qb = V[nbrs[x][0]], V[nbrs[y][0]]
                ux, uy = qa.x - p.x, qa.y - p.y
                wx, wy = qb.x - p.x, qb.y - p.y
                ang = math.atan2(abs(ux * wy - uy * wx), ux * wx + uy * wy)
                if ang < math.pi / 2 - ANGLE_TOL:
                    rep.angles.append((v, d.seg_ids[nbrs[x][1]], d.seg_ids[nbrs[y][1]],
                                       math.degrees(ang)))
    if len(V) >= 3 and not rep.duplicates:
        if all(_orient(V[0], V[1], V[k]) == 0 for k in range(2, len(V))):
            rep.hull.append(("collinear",))
        else:
            edges = {frozenset(s) for s in S}
            hull = convex_hull(list(V))
            for a, b in zip(hull, hull[1:] + hull[:1]):
                if frozenset((a, b)) not in edges:
                    rep.hull.append((a, b))
    elif len(V) < 3:
        rep.hull.append(("too-few-vertices",))
    return rep


def _segments_clash(V, s, t) -> bool:
    a, b = V[s[0]], V[s[1]]
    c, e = V[t[0]], V[t[1]]
    shared = set(s) & set(t)
    if len(shared) == 2:
        return True
    if shared:
        v = shared.pop()
        p = V[s[0] if s[1] == v else s[1]]
        q = V[t[0] if t[1] == v else t[1]]
        o = V[v]
        if _orient(o, p, q) != 0:
            return False
        return (p.x - o.x) * (q.x - o.x) + (p.y - o.y) * (q.y - o.y) > 0
    o1, o2 = _orient(a, b, c), _orient(a, b, e)
    o3, o4 = _orient(c, e, a), _orient(c, e, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and _on_closed(c, a, b):
        return True
    if o2 == 0 and _on_closed(e, a, b):
        return True
    if o3 == 0 and _on_closed(a, c, e):
        return True
    if o4 == 0 and _on_closed(b, c, e):
        return True
    return False


def _on_closed(p, a, b):
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def check_valid(d: Pslg) -> Pslg:
    rep = validate_pslg(d)
    if not rep.ok:
        raise InvalidDomain(f"invalid PSLG: {rep.violations()[:5]}", rep)
    return d
