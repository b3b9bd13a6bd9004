"""Refinement state shared by the sequential, replay and parallel drivers.

The engine owns a triangulation plus incremental bookkeeping: a record per
live triangle (circumcenter, radius, shortest edge, encroached segments),
the live subsegments and a grid index over their diametral circles, the
mesh-encroached segment set (D_T), the accumulated B-encroached set (D_B),
and the global closest-pair length used by Chew's rule.
"""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import kernels
from .domain import PeriodicPointSet, Pslg, local_feature_size, wrap_unit
from .errors import InvariantViolation, OutsideHull, RefinementStalled
from .mesh import Mesh
from .model import Candidate, QualityRule
from .triangulation import INF, PeriodicTriangulation, Triangulation

_diametral = kernels.diametral
_TIE = 1e-9
MAX_VERTICES = 400_000


def exact_r2(c) -> Fraction:
    """Exact squared circumradius of a triangle given as 6 floats."""
    ax, ay, bx, by, cx, cy = map(Fraction, c)
    o = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    ab = (ax - bx) ** 2 + (ay - by) ** 2
    bc = (bx - cx) ** 2 + (by - cy) ** 2
    ca = (cx - ax) ** 2 + (cy - ay) ** 2
    return ab * bc * ca / (4 * o * o)


def exact_len2(p, q) -> Fraction:
    return (Fraction(p[0]) - Fraction(q[0])) ** 2 + (Fraction(p[1]) - Fraction(q[1])) ** 2


class Rec:
    __slots__ = ("t", "x", "y", "r2", "l2", "edge", "key", "enc", "poor", "ver", "coords")

    def radius(self):
        return math.sqrt(self.r2)


class SegmentIndex:
    """Multi-level hashed grid over diametral circles."""

    def __init__(self, L: float, origin=(0.0, 0.0)):
        self.L = L
        self.ox, self.oy = origin
        self.levels: dict = {}
        self.where: dict = {}

    def _level(self, r):
        return max(0, int(math.floor(math.log2(self.L / r)))) if r > 0 else 60

    def _cell(self, h, x, y):
        cs = self.L / (1 << h)
        return (int(math.floor((x - self.ox) / cs)), int(math.floor((y - self.oy) / cs)))

    def add(self, sid, a, b):
        cx, cy = (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0
        r = math.hypot(b[0] - a[0], b[1] - a[1]) / 2.0
        h = self._level(r)
        cell = self._cell(h, cx, cy)
        self.levels.setdefault(h, {}).setdefault(cell, {})[sid] = (a, b)
        self.where[sid] = (h, cell)

    def remove(self, sid):
        h, cell = self.where.pop(sid)
        grid = self.levels[h]
        del grid[cell][sid]
        if not grid[cell]:
            del grid[cell]
            if not grid:
                del self.levels[h]

    def query(self, x, y) -> tuple:
        """Sorted ids of segments whose diametral circle strictly contains (x, y)."""
        out = []
        for h, grid in self.levels.items():
            i, j = self._cell(h, x, y)
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    bucket = grid.get((i + di, j + dj))
                    if not bucket:
                        continue
                    for sid, (a, b) in bucket.items():
                        if _diametral(a[0], a[1], b[0], b[1], x, y) < 0:
                            out.append(sid)
        out.sort()
        return tuple(out)


class Engine:
    def __init__(self, domain, rule: QualityRule, *, threads: int = 1,
                 check: bool = False, max_vertices: int = MAX_VERTICES):
        self.rule = rule
        self.chew = rule.kind == "chew"
        self.beta2 = rule.beta2
        self.beta2f = float(self.beta2)
        self.threads = max(1, int(threads))
        self.check = check
        self.max_vertices = max_vertices
        self._pool = None
        self.domain = domain
        self.seg: dict = {}
        self.seg_origin: dict = {}
        self.seg_edge: dict = {}
        self.seg_key: dict = {}
        self.dt: set = set()
        self.db: set = set()
        self.splits_by_origin: dict = {}
        # input segments each vertex lies on; a triangle with all three
        # vertices on one of them is a rounding sliver, not domain interior
        self.vorig: dict = {}
        if isinstance(domain, PeriodicPointSet):
            self.periodic = True
            self.tri = PeriodicTriangulation(domain.points)
            self.L = domain.diameter
            self.segidx = None
            self.next_sid = 0
        else:
            assert isinstance(domain, Pslg)
            self.periodic = False
            self.tri = Triangulation.build(domain.vertices)
            self.L = domain.diameter
            xs = [p.x for p in domain.vertices]
            ys = [p.y for p in domain.vertices]
            self.segidx = SegmentIndex(self.L, (min(xs), min(ys)))
            for sid, (i, j), orig in zip(domain.seg_ids, domain.segments, domain.provenance):
                self._add_segment(sid, i, j, orig)
            self.next_sid = domain.next_id
        self._rescan()
        if not self.periodic:
            for sid in sorted(self.seg):
                if self.segment_encroached(sid):
                    self.dt.add(sid)
        self.floor2 = self._stall_floor() ** 2

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def _stall_floor(self) -> float:
        if self.periodic or not self.seg:
            return math.sqrt(self.s2) / 1024.0
        d = self.domain
        s_min = min(local_feature_size(d, v) for v in d.vertices)
        return s_min / 1024.0

    # segments ---------------------------------------------------------------

    def seg_points(self, sid):
        u, w = self.seg[sid]
        xs, ys = self.tri.xs, self.tri.ys
        return (xs[u], ys[u]), (xs[w], ys[w])

    def _add_segment(self, sid, u, w, origin):
        self.seg[sid] = (u, w)
        self.seg_origin[sid] = origin
        for v in (u, w):
            self.vorig[v] = self.vorig.get(v, frozenset()) | {origin}
        self.seg_edge[(min(u, w), max(u, w))] = sid
        a, b = self.seg_points(sid)
        self.seg_key[tuple(sorted((a, b)))] = sid
        self.segidx.add(sid, a, b)

    def _drop_segment(self, sid):
        u, w = self.seg.pop(sid)
        a, b = (self.tri.xs[u], self.tri.ys[u]), (self.tri.xs[w], self.tri.ys[w])
        del self.seg_edge[(min(u, w), max(u, w))]
        del self.seg_key[tuple(sorted((a, b)))]
        self.segidx.remove(sid)
        self.dt.discard(sid)
        self.db.discard(sid)
        return u, w, self.seg_origin.pop(sid)

    def segment_encroached(self, sid) -> bool:
        """Missing from the triangulation, or an adjacent apex lies strictly
        inside the diametral circle (exact for Delaunay edges)."""
        u, w = self.seg[sid]
        tri = self.tri
        ts = tri.edge_triangles(u, w)
        if not ts:
            return True
        xs, ys = tri.xs, tri.ys
        for t in ts:
            for v in tri.tv[t]:
                if v != u and v != w and _diametral(xs[u], ys[u], xs[w], ys[w], xs[v], ys[v]) < 0:
                    return True
        return False

    def segment_encroached_brute(self, sid) -> bool:
        a, b = self.seg_points(sid)
        xs, ys = self.tri.xs, self.tri.ys
        if not self.tri.has_edge(*self.seg[sid]):
            return True
        return any(_diametral(a[0], a[1], b[0], b[1], xs[v], ys[v]) < 0
                   for v in range(len(xs)))

    def encroaches_any_brute(self, x, y) -> bool:
        for sid in self.seg:
            a, b = self.seg_points(sid)
            if _diametral(a[0], a[1], b[0], b[1], x, y) < 0:
                return True
        return False

    def live_dt(self) -> list:
        stale = [sid for sid in self.dt if sid not in self.seg or not self.segment_encroached(sid)]
        for sid in stale:
            self.dt.discard(sid)
        return sorted(self.dt, key=self.seg_sort_key)

    def seg_sort_key(self, sid):
        a, b = self.seg_points(sid)
        return (-((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2),
                (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)

    # triangle records --------------------------------------------------------

    def _make_rec(self, t) -> Rec:
        c = self.tri.coords(t)
        p = sorted(((c[0], c[1]), (c[2], c[3]), (c[4], c[5])))
        (ax, ay), (bx, by), (cx, cy) = p
        ux, uy, r2 = kernels.circumcenter(ax, ay, bx, by, cx, cy)
        e = [((ax - bx) ** 2 + (ay - by) ** 2, 0), ((bx - cx) ** 2 + (by - cy) ** 2, 1),
             ((cx - ax) ** 2 + (cy - ay) ** 2, 2)]
        l2, k = min(e)
        rec = Rec()
        rec.t = t
        rec.r2 = r2
        rec.l2 = l2
        rec.edge = (p[k], p[(k + 1) % 3])
        rec.key = tuple(p)
        rec.coords = (ax, ay, bx, by, cx, cy)
        rec.ver = 0
        if self.periodic:
            rec.x, rec.y = wrap_unit(ux), wrap_unit(uy)
            rec.enc = ()
        else:
            rec.x, rec.y = ux, uy
            rec.enc = self.segidx.query(ux, uy)
        rec.poor = None if self.chew else self._ruppert_poor(rec)
        return rec

    def _ruppert_poor(self, rec) -> bool:
        q = rec.r2 / rec.l2
        if q > self.beta2f * (1 + _TIE):
            return True
        if q < self.beta2f * (1 - _TIE):
            return False
        return exact_r2(rec.coords) > self.beta2 * exact_len2(*rec.edge)

    def is_poor(self, rec) -> bool:
        if not self.chew:
            return rec.poor
        thr = self.beta2f * self.s2
        if rec.r2 > thr * (1 + _TIE):
            return True
        if rec.r2 < thr * (1 - _TIE):
            return False
        return exact_r2(rec.coords) > self.beta2 * exact_len2(*self.s_pair)

    def is_flat(self, t) -> bool:
        if self.periodic:
            return False
        a, b, c = self.tri.tv[t]
        vo = self.vorig
        if a not in vo or b not in vo or c not in vo:
            return False
        return bool(vo[a] & vo[b] & vo[c])

    def live_triangles(self) -> list:
        return [t for t in self.tri.live_triangles() if t not in self.flat]

    def _classify(self, ts) -> list:
        flat = [t for t in ts if self.is_flat(t)]
        if flat:
            self.flat.update(flat)
            ts = [t for t in ts if t not in self.flat]
        if self.threads > 1 and len(ts) >= 64:
            if self._pool is None:
                self._pool = ThreadPoolExecutor(self.threads)
            n = self.threads
            size = (len(ts) + n - 1) // n
            chunks = [ts[i:i + size] for i in range(0, len(ts), size)]
            out = []
            for part in self._pool.map(lambda ch: [self._make_rec(t) for t in ch], chunks):
                out.extend(part)
            return out
        return [self._make_rec(t) for t in ts]

    def _remember(self, rec):
        t = rec.t
        self.recs[t] = rec
        self.by_key[rec.key] = t
        for sid in rec.enc:
            self.enc_rev.setdefault(sid, set()).add(t)
        if rec.poor:
            self.poor.add(t)
        if rec.l2 < self.s2:
            self.s2 = rec.l2
            self.s_pair = rec.edge
        if rec.l2 < self.floor2:
            raise RefinementStalled(
                f"edge of length {math.sqrt(rec.l2):.3g} below floor {math.sqrt(self.floor2):.3g}")
        if self.chew or rec.poor:
            heapq.heappush(self.b_heap if rec.enc else self.c_heap,
                           (-rec.r2, rec.x, rec.y, t, rec.ver))

    def _forget(self, t):
        self.flat.discard(t)
        rec = self.recs.pop(t, None)
        if rec is None:
            return
        del self.by_key[rec.key]
        for sid in rec.enc:
            s = self.enc_rev.get(sid)
            if s is not None:
                s.discard(t)
        self.poor.discard(t)

    def _rescan(self):
        self.recs: dict = {}
        self.flat: set = set()
        self.by_key: dict = {}
        self.enc_rev: dict = {}
        self.poor: set = set()
        self.c_heap: list = []
        self.b_heap: list = []
        if not hasattr(self, "s2"):
            self.s2 = math.inf
            self.s_pair = None
            self.floor2 = 0.0
        for rec in self._classify(self.tri.live_triangles()):
            self._remember(rec)

    def _apply(self, out):
        if out.rebuilt:
            self._rescan()
            return
        for t in out.removed:
            self._forget(t)
        if self.periodic:
            created = out.created
        else:
            tv, alive = self.tri.tv, self.tri.alive
            created = [t for t in out.created if alive[t] and tv[t][2] != INF]
        for rec in self._classify(created):
            self._remember(rec)

    def _after_vertex(self, x, y, out):
        if self.periodic:
            return
        self.dt.update(self.segidx.query(x, y))
        tv = self.tri.tv
        for t in out.removed:
            tri = tv[t]
            for k in range(3):
                u, w = tri[k], tri[(k + 1) % 3]
                if u == INF or w == INF:
                    continue
                sid = self.seg_edge.get((min(u, w), max(u, w)))
                if sid is not None and not self.tri.has_edge(u, w):
                    self.dt.add(sid)

    def _check_cap(self):
        n = len(self.tri.base) if self.periodic else len(self.tri.xs)
        if n > self.max_vertices:
            raise RefinementStalled(f"vertex cap {self.max_vertices} exceeded")

    # insertion -------------------------------------------------------------

    def insert_circumcenter(self, t):
        rec = self.recs[t]
        x, y = rec.x, rec.y
        try:
            out = self.tri.insert_point((x, y), hint=t)
        except OutsideHull as exc:
            raise InvariantViolation(f"circumcenter ({x}, {y}) outside the domain") from exc
        self._apply(out)
        self._after_vertex(x, y, out)
        self._check_cap()
        return x, y

    def split(self, sid):
        (ax, ay), (bx, by) = self.seg_points(sid)
        mx, my = (ax + bx) / 2.0, (ay + by) / 2.0
        u, w = self.seg[sid]
        v = self.tri.add_vertex(mx, my)
        _, _, origin = self._drop_segment(sid)
        kids = (self.next_sid, self.next_sid + 1)
        self.next_sid += 2
        self._add_segment(kids[0], u, v, origin)
        self._add_segment(kids[1], v, w, origin)
        self.splits_by_origin[origin] = self.splits_by_origin.get(origin, 0) + 1
        out = self.tri.insert_vertex(v, self.tri.vtri[u])
        self._apply(out)
        for t in sorted(self.enc_rev.pop(sid, ())):
            old = self.recs.get(t)
            if old is None:
                continue
            rec = self._make_rec(t)
            rec.ver = old.ver + 1
            self._forget(t)
            self._remember(rec)
        self._after_vertex(mx, my, out)
        for k in kids:
            if self.segment_encroached(k):
                self.dt.add(k)
        self._check_cap()
        return kids

    # picks used by the sequential driver ----------------------------------

    def _valid(self, entry):
        rec = self.recs.get(entry[3])
        return rec is not None and rec.ver == entry[4]

    def flush_b(self):
        """Move the segments encroached by every currently poor B center into D_B."""
        h = self.b_heap
        while h:
            if not self._valid(h[0]):
                heapq.heappop(h)
                continue
            rec = self.recs[h[0][3]]
            if not self.is_poor(rec):
                break
            heapq.heappop(h)
            self.db.update(rec.enc)

    def top_c(self):
        h = self.c_heap
        while h:
            if not self._valid(h[0]):
                heapq.heappop(h)
                continue
            rec = self.recs[h[0][3]]
            return rec.t if self.is_poor(rec) else None
        return None

    def top_db(self):
        live = [sid for sid in self.db if sid in self.seg]
        self.db = set(live)
        return min(live, key=self.seg_sort_key) if live else None

    # queries used by the parallel drivers ------------------------------------

    def poor_triangles(self) -> list:
        if self.chew:
            ts = [t for t, rec in self.recs.items() if self.is_poor(rec)]
        else:
            ts = list(self.poor)
        recs = self.recs
        ts.sort(key=lambda t: (-recs[t].r2, recs[t].x, recs[t].y))
        return ts

    def tri_candidate(self, t, birth=0) -> Candidate:
        return self.tri_candidate_from(self.recs[t], birth)

    def tri_candidate_from(self, rec, birth=0) -> Candidate:
        return Candidate("B" if rec.enc else "C", rec.x, rec.y, math.sqrt(rec.r2),
                         rec.key, birth)

    def seg_candidate(self, sid, kind="D_B", birth=0) -> Candidate:
        a, b = self.seg_points(sid)
        return Candidate(kind, (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0,
                         math.hypot(b[0] - a[0], b[1] - a[1]) / 2.0,
                         tuple(sorted((a, b))), birth)

    def max_radius(self) -> float:
        return math.sqrt(max((r.r2 for r in self.recs.values()), default=0.0))

    def shortest_edge(self) -> float:
        return math.sqrt(self.s2)

    def vertex_points(self) -> list:
        if self.periodic:
            return list(self.tri.base)
        return list(zip(self.tri.xs, self.tri.ys))

    # output ------------------------------------------------------------------

    def mesh(self) -> Mesh:
        tri = self.tri
        if self.periodic:
            tris, offs = [], []
            for t in tri.live_triangles():
                labels = tri.vertex_labels(t)
                i = labels.index(min(labels))
                labels = labels[i:] + labels[:i]
                tris.append((tuple(lb[0] for lb in labels), tuple((lb[1], lb[2]) for lb in labels)))
            tris.sort()
            return Mesh(tuple(tri.base), tuple(a for a, _ in tris), (),
                        tuple(b for _, b in tris))
        out = []
        for t in self.live_triangles():
            a, b, c = tri.tv[t]
            m = min(a, b, c)
            while a != m:
                a, b, c = b, c, a
            out.append((a, b, c))
        out.sort()
        segs = sorted((min(u, w), max(u, w)) for u, w in self.seg.values())
        return Mesh(tuple(zip(tri.xs, tri.ys)), tuple(out), tuple(segs))
