"""Round-based parallel refinement.

Each round classifies the poor triangles, picks an independent subset of
their circumcircles with the grid MIS, replaces circumcenters that would
encroach a subsegment by the midpoints of the encroached subsegments, and
inserts the survivors in decreasing-radius order. Rounds are recorded so the
run can be flattened into a sequential insertion log and replayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import PeriodicPointSet, Pslg, check_valid, min_feature_separation
from .engine import Engine
from .errors import ConfigError, InvariantViolation, RefinementStalled
from .geometry import GUARD
from .mis import conflict_pairs, grid_mis, radius_class, verify_mis
from .model import SQRT2, LogEntry, QualityRule
from .preprocess import preprocess_boundary, preprocess_feature_conforming
from .refine_seq import InsertionLog

POLICIES = ("maximal", "any-independent")


@dataclass
class RoundRecord:
    index: int
    label: tuple
    candidate_count: int
    chosen: list
    conflicts: list
    inserted_count: int
    max_radius_after: float
    encroach_events: list = field(default_factory=list)
    split_origins: list = field(default_factory=list)

    def to_json(self):
        return {"index": self.index, "label": list(self.label),
                "candidate_count": self.candidate_count,
                "chosen": [c.to_json() for c in self.chosen],
                "conflicts": [list(p) for p in self.conflicts],
                "inserted_count": self.inserted_count,
                "max_radius_after": self.max_radius_after,
                "encroach_events": [list(e) for e in self.encroach_events],
                "split_origins": list(self.split_origins)}


@dataclass
class Trace:
    algorithm: str
    rule: QualityRule
    domain: object
    L: float
    s: float
    initial_max_radius: float
    rounds: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.rounds)

    def radius_series(self) -> list:
        """Largest circumradius after round k, with index 0 the initial mesh."""
        return [self.initial_max_radius] + [r.max_radius_after for r in self.rounds]

    def to_json(self):
        return {"algorithm": self.algorithm,
                "rule": {"kind": self.rule.kind, "beta": self.rule.beta},
                "L": self.L, "s": self.s, "initial_max_radius": self.initial_max_radius,
                "meta": self.meta, "rounds": [r.to_json() for r in self.rounds]}


def flatten(trace: Trace) -> InsertionLog:
    """Concatenate the rounds, each in its insertion order."""
    log = InsertionLog(trace.rule)
    for rnd in trace.rounds:
        for c in sorted(rnd.chosen, key=lambda c: c.sort_key()):
            log.entries.append(LogEntry(c, len(log.entries)))
    return log


def triangle_class(l2: float, s2: float) -> int:
    """Edge class of a squared shortest-edge length; sub-s edges are class 1."""
    if l2 < s2:
        return 1
    return math.frexp(l2 / s2)[1]


def _edge_key(p, q):
    p, q = sorted((p, q))
    fx, fy = math.floor(p[0]), math.floor(p[1])
    return ((p[0] - fx, p[1] - fy), (q[0] - fx, q[1] - fy))


class _Run:
    def __init__(self, domain, rule, algorithm, *, threads, check, policy, L=None):
        if policy not in POLICIES:
            raise ConfigError(f"unknown MIS policy {policy!r}")
        self.eng = Engine(domain, rule, threads=threads, check=check)
        self.check = check
        self.policy = policy
        self.torus = self.eng.periodic
        if L is None:
            L = domain.diameter
            if self.torus:
                L = max(L, self._longest_edge())
        self.L = L
        self.trace = Trace(algorithm, rule, domain, L, 0.0, self.eng.max_radius())
        self.trace.meta["periodic"] = self.torus

    def _longest_edge(self):
        return max(math.sqrt(max((r.coords[0] - r.coords[2]) ** 2 + (r.coords[1] - r.coords[3]) ** 2,
                                 (r.coords[2] - r.coords[4]) ** 2 + (r.coords[3] - r.coords[5]) ** 2,
                                 (r.coords[4] - r.coords[0]) ** 2 + (r.coords[5] - r.coords[1]) ** 2))
                   for r in self.eng.recs.values())

    def _select(self, cands):
        if self.policy == "maximal":
            pool = cands
        else:
            Leff = max(self.L, max(c.radius for c in cands))
            hs = [radius_class(c.radius, Leff) for c in cands]
            top = min(hs)
            pool = [c for c, h in zip(cands, hs) if h == top]
        chosen = grid_mis(pool, self.L, self.torus)
        if self.check:
            ind, mx = verify_mis(pool, chosen, self.torus)
            if not (ind and mx):
                raise InvariantViolation(f"MIS check failed (independent={ind}, maximal={mx})")
        return chosen

    def round(self, ts, label) -> RoundRecord:
        eng = self.eng
        k = len(self.trace.rounds)
        recs = {}
        cands = []
        for t in ts:
            rec = eng.recs[t]
            c = eng.tri_candidate_from(rec, k)
            recs[c.source] = rec
            cands.append(c)
        conflicts = [(a.radius, b.radius) for a, b in conflict_pairs(cands, self.L, self.torus)]
        bc = self._select(cands)
        sids = set()
        events = []
        for c in bc:
            if c.kind == "B":
                for sid in recs[c.source].enc:
                    sids.add(sid)
                    a, b = eng.seg_points(sid)
                    events.append((c.radius, math.hypot(b[0] - a[0], b[1] - a[1]) / 2.0))
        ds = [eng.seg_candidate(sid, "D_B", k) for sid in sorted(sids)]
        if self.check and ds:
            _check_midpoints(ds)
        cs = _filter_against([c for c in bc if c.kind == "C"], ds)
        todo = sorted(ds + cs, key=lambda c: c.sort_key())
        done = []
        origins = []
        for c in todo:
            if c.is_circumcenter:
                t = eng.by_key.get(c.source)
                if t is None:
                    # a guarded near-tie let an earlier point remove it
                    continue
                if self.check and not self.torus and eng.encroaches_any_brute(c.x, c.y):
                    raise InvariantViolation(f"circumcenter {c.location} encroaches")
                eng.insert_circumcenter(t)
            else:
                sid = eng.seg_key[c.source]
                origins.append(eng.seg_origin[sid])
                eng.split(sid)
            done.append(c)
        if not done:
            raise RefinementStalled(f"round {k} inserted nothing")
        if not self.torus and eng.live_dt():
            raise InvariantViolation("a mesh vertex lies inside a diametral circle")
        rec = RoundRecord(k, tuple(label), len(cands), done, conflicts, len(done),
                          eng.max_radius(), events, sorted(origins))
        self.trace.rounds.append(rec)
        return rec

    def finish(self):
        eng = self.eng
        if self.check:
            if eng.poor_triangles():
                raise InvariantViolation("poor triangles remain")
            if not self.torus:
                for sid in eng.seg:
                    if eng.segment_encroached_brute(sid):
                        raise InvariantViolation(f"segment {sid} still encroached")
        self.trace.meta["final_shortest_edge"] = eng.shortest_edge()
        self.trace.meta["vertices"] = len(eng.vertex_points())
        return eng.mesh(), self.trace


def _check_midpoints(ds):
    for a in ds:
        for b in ds:
            if a is not b and (a.x - b.x) ** 2 + (a.y - b.y) ** 2 < b.radius ** 2 * (1 - GUARD):
                raise InvariantViolation(f"midpoint {a.location} inside another diametral circle")


def _filter_against(cs, ds):
    """Circumcenters that conflict with no diametral candidate."""
    if not cs or not ds:
        return list(cs)
    g = 1.0 - GUARD
    dx = np.array([d.x for d in ds])
    dy = np.array([d.y for d in ds])
    dr2 = np.array([d.radius for d in ds]) ** 2
    out = []
    for c in cs:
        d2 = (dx - c.x) ** 2 + (dy - c.y) ** 2
        r2 = c.radius * c.radius
        if not ((d2 < r2 * g) & (r2 < 2.0 * dr2 * g)).any():
            out.append(c)
    return out


def _loop_generic(run):
    eng = run.eng
    while True:
        ts = eng.poor_triangles()
        if not ts:
            break
        run.round(ts, (len(run.trace.rounds),))


def _loop_classes(run, s):
    eng = run.eng
    s2 = s * s
    imax = max(1, math.ceil(2 * math.log(run.L / s) / math.log(2))) if run.L > s else 1
    run.trace.s = s
    run.trace.meta["classes"] = imax
    passes = 0
    conserve = run.check and run.torus

    def cls(t):
        return triangle_class(eng.recs[t].l2, s2)

    while eng.poor_triangles():
        passes += 1
        i = 1
        while True:
            poor = eng.poor_triangles()
            if not poor or i > max(imax, max(cls(t) for t in poor)):
                break
            inner = 0
            while True:
                ts = [t for t in eng.poor_triangles() if cls(t) == i]
                if not ts:
                    break
                if conserve:
                    before = _class_edges(eng, s2, i)
                    ratios = _edge_ratios(eng, s2, i)
                run.round(ts, (passes, i, inner))
                if conserve:
                    if _class_edges(eng, s2, i) != before:
                        raise InvariantViolation(f"class {i} edges changed during its loop")
                    after = _edge_ratios(eng, s2, i)
                    for e, q in after.items():
                        if e in ratios and q > ratios[e] * (1 + 1e-9):
                            raise InvariantViolation(f"ratio at class-{i} edge {e} increased")
                inner += 1
            i += 1
    run.trace.meta["passes"] = passes


def _tri_edges(rec):
    c = rec.coords
    pts = [(c[0], c[1]), (c[2], c[3]), (c[4], c[5])]
    for k in range(3):
        p, q = pts[k], pts[(k + 1) % 3]
        yield _edge_key(p, q), (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def _class_edges(eng, s2, i):
    return {e for rec in eng.recs.values() for e, l2 in _tri_edges(rec)
            if triangle_class(l2, s2) == i}


def _edge_ratios(eng, s2, i):
    out = {}
    for rec in eng.recs.values():
        q = rec.r2 / rec.l2
        for e, l2 in _tri_edges(rec):
            if triangle_class(l2, s2) <= i:
                out[e] = max(out.get(e, 0.0), q)
    return out


def _periodic(P):
    if not isinstance(P, PeriodicPointSet):
        raise ConfigError("expected a PeriodicPointSet")
    return P


def _pslg(d, feature_alpha=None):
    if not isinstance(d, Pslg):
        raise ConfigError("expected a Pslg")
    check_valid(d)
    out, rep = preprocess_boundary(d, samples=0)
    meta = {"preprocess_iterations": rep.iterations, "preprocess_splits": rep.segments_split}
    if feature_alpha is not None:
        out = preprocess_feature_conforming(out, feature_alpha)
        meta["alpha"] = feature_alpha
    return out, meta


def parallel_generic_pps(P, rule: QualityRule = QualityRule(), mis_policy: str = "maximal", *,
                         threads: int = 1, check: bool = False):
    run = _Run(_periodic(P), rule, "par-generic", threads=threads, check=check, policy=mis_policy)
    try:
        _loop_generic(run)
        return run.finish()
    finally:
        run.eng.close()


def parallel_chew_pps(P, beta: float = SQRT2, *, threads: int = 1, check: bool = False):
    m, tr = parallel_generic_pps(P, QualityRule("chew", beta), threads=threads, check=check)
    tr.algorithm = "par-chew"
    tr.s = tr.meta["final_shortest_edge"]
    return m, tr


def parallel_ruppert_pps(P, beta: float = SQRT2, *, threads: int = 1, check: bool = False):
    run = _Run(_periodic(P), QualityRule("ruppert", beta), "par-ruppert",
               threads=threads, check=check, policy="maximal")
    try:
        _loop_classes(run, run.eng.shortest_edge())
        return run.finish()
    finally:
        run.eng.close()


def parallel_generic_pslg(d, rule: QualityRule = QualityRule(), mis_policy: str = "maximal", *,
                          threads: int = 1, check: bool = False, preprocess: bool = True):
    meta = {}
    if preprocess:
        d, meta = _pslg(d)
    run = _Run(d, rule, "par-generic", threads=threads, check=check, policy=mis_policy)
    run.trace.meta.update(meta)
    try:
        _loop_generic(run)
        return run.finish()
    finally:
        run.eng.close()


def parallel_chew_pslg(d, beta: float = SQRT2, *, threads: int = 1, check: bool = False,
                       preprocess: bool = True):
    m, tr = parallel_generic_pslg(d, QualityRule("chew", beta), threads=threads, check=check,
                                  preprocess=preprocess)
    tr.algorithm = "par-chew"
    tr.s = min_feature_separation(tr.domain)
    return m, tr


def parallel_ruppert_pslg(d, beta: float = SQRT2, *, alpha: float = 3.0, threads: int = 1,
                          check: bool = False, preprocess: bool = True):
    meta = {}
    if preprocess:
        d, meta = _pslg(d, alpha)
    run = _Run(d, QualityRule("ruppert", beta), "par-ruppert", threads=threads, check=check,
               policy="maximal")
    run.trace.meta.update(meta)
    try:
        _loop_classes(run, min_feature_separation(d))
        return run.finish()
    finally:
        run.eng.close()


__all__ = ["POLICIES", "RoundRecord", "Trace", "flatten", "parallel_chew_pps",
           "parallel_chew_pslg", "parallel_generic_pps", "parallel_generic_pslg",
           "parallel_ruppert_pps", "parallel_ruppert_pslg", "triangle_class"]
