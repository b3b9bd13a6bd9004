"""Incremental Delaunay triangulation (Bowyer-Watson with a ghost vertex).

Cocircular ties are resolved by symbolic perturbation: the lexicographically
largest of the four points is lifted first. Triangle slots are never reused,
so a triangle id identifies one triangle for the lifetime of the structure.

The periodic mode triangulates the translates ``P + {-k..k}^2`` of the base
points (k = 1, or k = 2 while some triangle is too large) and exposes the
canonical copy of every triangle orbit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import kernels
from .domain import snap_unit
from .errors import DegenerateInput, DuplicateVertex, OutsideHull

INF = -1
_orient = kernels.orient2d
_incircle = kernels.incircle
_diametral = kernels.diametral


@dataclass
class InsertionOutcome:
    vertex: int
    removed: list = field(default_factory=list)
    created: list = field(default_factory=list)
    rebuilt: bool = False


def hilbert_order(pts) -> list:
    """Indices of pts sorted along a Hilbert curve (ties by index)."""
    if not pts:
        return []
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, y0 = min(xs), min(ys)
    span = max(max(xs) - x0, max(ys) - y0) or 1.0
    n = 1 << 16
    keys = []
    for k, (x, y) in enumerate(pts):
        ix = min(n - 1, int((x - x0) / span * (n - 1)))
        iy = min(n - 1, int((y - y0) / span * (n - 1)))
        keys.append((_hilbert_d(n, ix, iy), k))
    keys.sort()
    return [k for _, k in keys]


def _hilbert_d(n, x, y):
    d = 0
    s = n >> 1
    while s > 0:
        rx = 1 if x & s else 0
        ry = 1 if y & s else 0
        d += s * s * ((3 * rx) ^ ry)
        if ry == 0:
            if rx == 1:
                x = s - 1 - x
                y = s - 1 - y
            x, y = y, x
        s >>= 1
    return d


class Triangulation:
    """Planar Delaunay triangulation of the convex hull of its vertices.

    Triangles are ccw vertex triples; ghost triangles ``(a, b, INF)`` close
    the hull with the outside to the left of ``a -> b``. ``tn[t][i]`` is the
    neighbor across the edge opposite ``tv[t][i]``.
    """

    periodic = False

    def __init__(self):
        self.xs: list = []
        self.ys: list = []
        self.tv: list = []
        self.tn: list = []
        self.alive: list = []
        self.vtri: list = []
        self.index: dict = {}
        self.generation = 0
        self._last = -1
        self._walk = 0

    # construction ---------------------------------------------------------

    @classmethod
    def build(cls, points) -> "Triangulation":
        t = cls()
        for p in points:
            t.add_vertex(float(p[0]), float(p[1]))
        n = len(t.xs)
        if n < 3:
            raise DegenerateInput("need at least 3 points")
        xs, ys = t.xs, t.ys
        c = next((k for k in range(2, n)
                  if _orient(xs[0], ys[0], xs[1], ys[1], xs[k], ys[k]) != 0), None)
        if c is None:
            raise DegenerateInput("all points are collinear")
        a, b = 0, 1
        if _orient(xs[a], ys[a], xs[b], ys[b], xs[c], ys[c]) < 0:
            a, b = b, a
        t._seed(a, b, c)
        rest = [k for k in range(n) if k not in (a, b, c)]
        order = hilbert_order([(xs[k], ys[k]) for k in rest])
        for k in order:
            t.insert_vertex(rest[k])
        return t

    def add_vertex(self, x: float, y: float) -> int:
        key = (x, y)
        if key in self.index:
            raise DuplicateVertex(f"vertex ({x!r}, {y!r}) already present")
        v = len(self.xs)
        self.index[key] = v
        self.xs.append(x)
        self.ys.append(y)
        self.vtri.append(-1)
        return v

    def _new_tri(self, tri):
        t = len(self.tv)
        self.tv.append(tri)
        self.tn.append([-1, -1, -1])
        self.alive.append(True)
        return t

    def _seed(self, a, b, c):
        tris = [(a, b, c), (c, b, INF), (a, c, INF), (b, a, INF)]
        ids = [self._new_tri(tri) for tri in tris]
        edges = {}
        for t in ids:
            tri = self.tv[t]
            for i in range(3):
                edges[(tri[(i + 1) % 3], tri[(i + 2) % 3])] = (t, i)
        for (u, w), (t, i) in edges.items():
            self.tn[t][i] = edges[(w, u)][0]
        for v in (a, b, c):
            self.vtri[v] = ids[0]
        self._last = ids[0]

    # predicates -----------------------------------------------------------

    def _perturbed(self, a, b, c, x, y):
        """Sign of the perturbed incircle when the exact one is zero."""
        xs, ys = self.xs, self.ys
        pa = (xs[a], ys[a])
        pb = (xs[b], ys[b])
        pc = (xs[c], ys[c])
        top = max(pa, pb, pc, (x, y))
        if top == (x, y):
            return -1
        if top == pa:
            return _orient(x, y, pb[0], pb[1], pc[0], pc[1])
        if top == pb:
            return _orient(x, y, pc[0], pc[1], pa[0], pa[1])
        return _orient(x, y, pa[0], pa[1], pb[0], pb[1])

    def _conflict(self, t, x, y) -> bool:
        a, b, c = self.tv[t]
        xs, ys = self.xs, self.ys
        if c == INF:
            o = _orient(xs[a], ys[a], xs[b], ys[b], x, y)
            if o:
                return o > 0
            return _diametral(xs[a], ys[a], xs[b], ys[b], x, y) < 0
        s = _incircle(xs[a], ys[a], xs[b], ys[b], xs[c], ys[c], x, y)
        if s:
            return s > 0
        return self._perturbed(a, b, c, x, y) > 0

    # location -------------------------------------------------------------

    def _walk_to(self, x, y, start):
        """Visibility walk; returns a finite triangle containing (x, y) or
        the ghost whose hull edge sees it."""
        tv, tn, xs, ys = self.tv, self.tn, self.xs, self.ys
        t = start
        if t < 0 or not self.alive[t]:
            t = self._last
            if t < 0 or not self.alive[t]:
                t = next(k for k in range(len(tv) - 1, -1, -1) if self.alive[k])
        if tv[t][2] == INF:
            t = tn[t][2]
        r = self._walk
        while True:
            tri = tv[t]
            if tri[2] == INF:
                self._walk = r
                return t
            for k in (r, (r + 1) % 3, (r + 2) % 3):
                u = tri[(k + 1) % 3]
                w = tri[(k + 2) % 3]
                if _orient(xs[u], ys[u], xs[w], ys[w], x, y) < 0:
                    t = tn[t][k]
                    break
            else:
                self._walk = r
                return t
            r = (r + 1) % 3

    def locate(self, p, hint: int = -1):
        """Classify p as ('vertex', v), ('edge', (u, w)) or ('triangle', t)."""
        x, y = float(p[0]), float(p[1])
        v = self.index.get((x, y))
        if v is not None and self.vtri[v] >= 0:
            return ("vertex", v)
        t = self._walk_to(x, y, hint)
        tri = self.tv[t]
        if tri[2] == INF:
            raise OutsideHull(f"({x}, {y}) is outside the convex hull")
        xs, ys = self.xs, self.ys
        for k in range(3):
            u, w = tri[(k + 1) % 3], tri[(k + 2) % 3]
            if _orient(xs[u], ys[u], xs[w], ys[w], x, y) == 0:
                return ("edge", (u, w))
        return ("triangle", t)

    # insertion ------------------------------------------------------------

    def insert_point(self, p, hint: int = -1) -> InsertionOutcome:
        v = self.add_vertex(float(p[0]), float(p[1]))
        return self.insert_vertex(v, hint)

    def insert_batch(self, points, hint: int = -1) -> list:
        return [self.insert_point(p, hint) for p in points]

    def insert_vertex(self, v: int, hint: int = -1) -> InsertionOutcome:
        x, y = self.xs[v], self.ys[v]
        tv, tn, alive = self.tv, self.tn, self.alive
        t0 = self._walk_to(x, y, hint)
        cavity = [t0]
        incav = {t0}
        conflict = self._conflict
        i = 0
        while i < len(cavity):
            for n in tn[cavity[i]]:
                if n not in incav and conflict(n, x, y):
                    incav.add(n)
                    cavity.append(n)
            i += 1
        boundary = []
        for t in cavity:
            a, b, c = tv[t]
            n0, n1, n2 = tn[t]
            if n0 not in incav:
                boundary.append((b, c, n0))
            if n1 not in incav:
                boundary.append((c, a, n1))
            if n2 not in incav:
                boundary.append((a, b, n2))
        created = []
        start_of = {}
        end_of = {}
        for u, w, n in boundary:
            if u == INF:
                tri = (w, v, INF)
            elif w == INF:
                tri = (v, u, INF)
            else:
                tri = (u, w, v)
            nt = self._new_tri(tri)
            tn[nt][_opposite(tri, u, w)] = n
            tn[n][_opposite(tv[n], w, u)] = nt
            start_of[u] = nt
            end_of[w] = nt
            created.append(nt)
        for (u, w, _), nt in zip(boundary, created):
            tri = tv[nt]
            tn[nt][_opposite(tri, w, v)] = start_of[w]
            tn[nt][_opposite(tri, v, u)] = end_of[u]
        for t in cavity:
            alive[t] = False
        vtri = self.vtri
        for nt in created:
            a, b, c = tv[nt]
            if c != INF:
                vtri[a] = vtri[b] = vtri[c] = nt
                self._last = nt
        return InsertionOutcome(v, cavity, created)

    # queries --------------------------------------------------------------

    def is_ghost(self, t: int) -> bool:
        return self.tv[t][2] == INF

    def live_triangles(self) -> list:
        tv, alive = self.tv, self.alive
        return [t for t in range(len(tv)) if alive[t] and tv[t][2] != INF]

    def coords(self, t: int):
        a, b, c = self.tv[t]
        xs, ys = self.xs, self.ys
        return xs[a], ys[a], xs[b], ys[b], xs[c], ys[c]

    def around(self, u: int) -> list:
        """Triangles (including ghosts) incident to vertex u, ccw order."""
        start = self.vtri[u]
        out = []
        t = start
        tv, tn = self.tv, self.tn
        while True:
            out.append(t)
            i = tv[t].index(u)
            t = tn[t][(i + 1) % 3]
            if t == start:
                return out

    def has_edge(self, u: int, w: int) -> bool:
        if self.vtri[u] < 0 or self.vtri[w] < 0:
            return False
        return any(w in self.tv[t] for t in self.around(u))

    def edge_triangles(self, u: int, w: int) -> list:
        """Finite triangles containing edge uw (empty if not an edge)."""
        if self.vtri[u] < 0 or self.vtri[w] < 0:
            return []
        return [t for t in self.around(u) if w in self.tv[t] and self.tv[t][2] != INF]

    def hull_size(self) -> int:
        return sum(1 for t in range(len(self.tv)) if self.alive[t] and self.tv[t][2] == INF)

    def vertex_count(self) -> int:
        return sum(1 for t in self.vtri if t >= 0)

    def canonical_form(self):
        """Sorted tuple of triangles as sorted coordinate triples."""
        out = []
        for t in self.live_triangles():
            ax, ay, bx, by, cx, cy = self.coords(t)
            out.append(tuple(sorted(((ax, ay), (bx, by), (cx, cy)))))
        return tuple(sorted(out))


def _opposite(tri, u, w):
    """Index of the vertex opposite directed edge u -> w in tri."""
    for i in range(3):
        if tri[(i + 1) % 3] == u and tri[(i + 2) % 3] == w:
            return i
    raise AssertionError(f"edge {u}->{w} not in {tri}")


def delaunay_check(t) -> bool:
    """Exhaustive empty-circle check with exact predicates."""
    if isinstance(t, PeriodicTriangulation):
        return _periodic_check(t)
    xs, ys = t.xs, t.ys
    verts = [v for v in range(len(xs)) if t.vtri[v] >= 0]
    for k in range(len(t.tv)):
        if not t.alive[k]:
            continue
        tri = t.tv[k]
        for i, n in enumerate(t.tn[k]):
            if not t.alive[n] or k not in t.tn[n]:
                return False
        a, b, c = tri
        if c == INF:
            for v in verts:
                if _orient(xs[a], ys[a], xs[b], ys[b], xs[v], ys[v]) > 0:
                    return False
            continue
        if _orient(xs[a], ys[a], xs[b], ys[b], xs[c], ys[c]) <= 0:
            return False
        for v in verts:
            if v in tri:
                continue
            if _incircle(xs[a], ys[a], xs[b], ys[b], xs[c], ys[c], xs[v], ys[v]) > 0:
                return False
    return True


def _periodic_check(pt) -> bool:
    for t in pt.live_triangles():
        ax, ay, bx, by, cx, cy = pt.coords(t)
        if _orient(ax, ay, bx, by, cx, cy) <= 0:
            return False
        own = {(ax, ay), (bx, by), (cx, cy)}
        for x, y in pt.base:
            for ox in range(-2, 3):
                for oy in range(-2, 3):
                    q = (x + ox, y + oy)
                    if q in own:
                        continue
                    if _incircle(ax, ay, bx, by, cx, cy, q[0], q[1]) > 0:
                        return False
    area = math.fsum(_area(pt.coords(t)) for t in pt.live_triangles())
    return abs(area - 1.0) < 1e-9


def _area(c):
    ax, ay, bx, by, cx, cy = c
    return 0.5 * ((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


# periodic mode -------------------------------------------------------------

_BIG = 0.25 * (1.0 - 1e-9)


class PeriodicTriangulation:
    """Delaunay triangulation of a point set on the unit flat torus.

    ``live_triangles`` returns canonical lifted triangles: the vertex with the
    smallest (orbit, ox, oy) label has offset (0, 0). ``generation`` changes
    whenever the lifted structure is rebuilt and triangle ids are reissued.
    """

    periodic = True

    def __init__(self, points):
        self.base: list = []
        self.base_index: dict = {}
        for x, y in points:
            self._register(float(x), float(y))
        if not self.base:
            raise DegenerateInput("empty periodic point set")
        self.generation = -1
        self._rebuild(1)

    def _register(self, x, y):
        key = (x, y)
        if key in self.base_index:
            raise DuplicateVertex(f"periodic point ({x!r}, {y!r}) already present")
        if not (0.0 <= x < 1.0 and 0.0 <= y < 1.0) or snap_unit(x) != x or snap_unit(y) != y:
            raise ValueError(f"periodic point ({x!r}, {y!r}) is not a snapped unit-square point")
        self.base_index[key] = len(self.base)
        self.base.append(key)

    def _offsets(self, k):
        offs = [(ox, oy) for ox in range(-k, k + 1) for oy in range(-k, k + 1)]
        offs.remove((0, 0))
        return [(0, 0)] + offs

    def _rebuild(self, k):
        while True:
            self.k = k
            pts = []
            self.meta = []
            self.lifted = {}
            for o, (x, y) in enumerate(self.base):
                for ox, oy in self._offsets(k):
                    self.lifted[(o, ox, oy)] = len(pts)
                    self.meta.append((o, ox, oy))
                    pts.append((x + ox, y + oy))
            self.tri = Triangulation.build(pts)
            self.canon = {}
            self.big = 0
            for t in self.tri.live_triangles():
                self._maybe_add(t)
            self.generation += 1
            if k == 1 and not self._valid_k1():
                k = 2
                continue
            return

    def _valid_k1(self):
        if self.big:
            return False
        area = math.fsum(_area(self.tri.coords(t)) for t in self.canon)
        return abs(area - 1.0) < 1e-9

    def _is_canonical(self, t):
        meta = self.meta
        m = min(meta[v] for v in self.tri.tv[t])
        return m[1] == 0 and m[2] == 0

    def _maybe_add(self, t):
        if self.tri.tv[t][2] == INF or not self._is_canonical(t):
            return False
        ax, ay, bx, by, cx, cy = self.tri.coords(t)
        _, _, r2 = kernels.circumcenter(ax, ay, bx, by, cx, cy)
        big = r2 >= _BIG
        self.canon[t] = big
        self.big += big
        return True

    def _drop(self, t):
        big = self.canon.pop(t, None)
        if big is None:
            return False
        self.big -= big
        return True

    # interface shared with the planar structure ----------------------------

    def live_triangles(self) -> list:
        return sorted(self.canon)

    def coords(self, t: int):
        return self.tri.coords(t)

    def vertex_labels(self, t: int):
        return [self.meta[v] for v in self.tri.tv[t]]

    def insert_point(self, p, hint: int = -1) -> InsertionOutcome:
        x, y = float(p[0]), float(p[1])
        self._register(x, y)
        o = len(self.base) - 1
        anchor = None
        if hint >= 0 and self.tri.alive[hint]:
            anchor = self.meta[self.tri.tv[hint][0]]
        removed, created = [], []
        for ox, oy in self._offsets(self.k):
            v = self.tri.add_vertex(x + ox, y + oy)
            self.lifted[(o, ox, oy)] = v
            self.meta.append((o, ox, oy))
            h = -1
            if anchor is not None:
                w = self.lifted.get((anchor[0], anchor[1] + ox, anchor[2] + oy))
                if w is not None:
                    h = self.tri.vtri[w]
            out = self.tri.insert_vertex(v, h)
            removed.extend(out.removed)
            created.extend(out.created)
        gone = [t for t in removed if self._drop(t)]
        new = [t for t in created if self.tri.alive[t] and self._maybe_add(t)]
        if (self.k == 1 and self.big) or (self.k == 2 and not self.big):
            self._rebuild(1)
            return InsertionOutcome(o, gone, self.live_triangles(), rebuilt=True)
        return InsertionOutcome(o, gone, new)

    def insert_batch(self, points, hint: int = -1) -> list:
        return [self.insert_point(p, hint) for p in points]

    def canonical_form(self):
        """Sorted canonical triangles as (orbit, dx, dy) triples rotated to
        start at the canonical vertex."""
        out = []
        for t in self.canon:
            labels = self.vertex_labels(t)
            i = labels.index(min(labels))
            rot = labels[i:] + labels[:i]
            out.append(tuple(rot))
        return tuple(sorted(out))
