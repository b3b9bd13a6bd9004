"""Sequential Delaunay refinement and the replay validator.

Selection order: mesh-encroached segments (D_T), then accumulated
B-encroached segments (D_B), then circumcenters of poor non-encroaching
triangles (C); larger circles first, then by location.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .domain import PeriodicPointSet, check_valid
from .engine import Engine, exact_len2, exact_r2
from .errors import InvariantViolation, NotSequentializable
from .model import Candidate, LogEntry, QualityRule


@dataclass
class InsertionLog:
    rule: QualityRule
    entries: list = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def to_json(self):
        return {"rule": {"kind": self.rule.kind, "beta": self.rule.beta},
                "entries": [[e.iteration, e.candidate.to_json()] for e in self.entries]}

    @classmethod
    def from_json(cls, doc):
        rule = QualityRule(doc["rule"]["kind"], doc["rule"]["beta"])
        return cls(rule, [LogEntry(Candidate.from_json(c), it) for it, c in doc["entries"]])


@dataclass
class CandidateSets:
    B: list
    C: list
    D_T: list
    D_B: list


def _shortest_edge2(tri, ts=None):
    best = math.inf
    pair = None
    for t in tri.live_triangles() if ts is None else ts:
        c = tri.coords(t)
        pts = [(c[0], c[1]), (c[2], c[3]), (c[4], c[5])]
        for k in range(3):
            p, q = pts[k], pts[(k + 1) % 3]
            d = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
            if d < best:
                best, pair = d, (p, q)
    return best, pair


def is_poor(tri, t, rule: QualityRule, shortest=None) -> bool:
    """Exact poorness of live triangle ``t`` of a triangulation.

    ``shortest`` overrides the global shortest edge length used by the
    Chew rule (computed by a full scan when omitted).
    """
    c = tri.coords(t)
    r2 = exact_r2(c)
    if rule.kind == "ruppert":
        pts = [(c[0], c[1]), (c[2], c[3]), (c[4], c[5])]
        l2 = min(exact_len2(pts[k], pts[(k + 1) % 3]) for k in range(3))
    elif shortest is not None:
        l2 = Fraction(shortest) ** 2
    else:
        _, pair = _shortest_edge2(tri)
        l2 = exact_len2(*pair)
    return r2 > rule.beta2 * l2


def classify_candidates(engine: Engine, carried_db=()) -> CandidateSets:
    """Candidate sets recomputed from scratch by brute force.

    Independent of the engine's incremental bookkeeping; used to
    cross-check it.
    """
    tri = engine.tri
    B, C = [], []
    if engine.chew:
        s2, pair = _shortest_edge2(tri, engine.live_triangles())
    for t in engine.live_triangles():
        rec = engine._make_rec(t)
        if engine.chew:
            poor = exact_r2(rec.coords) > engine.beta2 * exact_len2(*pair)
        else:
            poor = exact_r2(rec.coords) > engine.beta2 * exact_len2(*rec.edge)
        if not poor:
            continue
        cand = engine.tri_candidate_from(rec)
        enc = engine.periodic is False and engine.encroaches_any_brute(rec.x, rec.y)
        (B if enc else C).append((cand, rec))
    D_T = [engine.seg_candidate(sid, "D_T") for sid in sorted(engine.seg)
           if engine.segment_encroached_brute(sid)]
    db = set(carried_db)
    for _, rec in B:
        for sid in engine.seg:
            a, b = engine.seg_points(sid)
            if kernels.diametral(a[0], a[1], b[0], b[1], rec.x, rec.y) < 0:
                db.add(sid)
    D_B = [engine.seg_candidate(sid, "D_B") for sid in sorted(db) if sid in engine.seg]
    return CandidateSets([c for c, _ in B], [c for c, _ in C], D_T, D_B)


def _prepare(domain):
    if not isinstance(domain, PeriodicPointSet):
        check_valid(domain)
    return domain


def seq_refine(domain, rule: QualityRule = QualityRule(), *, threads: int = 1,
               check: bool = False, observer=None, max_vertices=None):
    """Refine until no poor triangle and no encroached subsegment remain.

    Returns (Mesh, InsertionLog). ``observer(engine, entry)`` is called after
    every insertion.
    """
    _prepare(domain)
    kw = {} if max_vertices is None else {"max_vertices": max_vertices}
    eng = Engine(domain, rule, threads=threads, check=check, **kw)
    log = InsertionLog(rule)
    try:
        it = 0
        while True:
            eng.flush_b()
            dt = eng.live_dt()
            if dt:
                cand = eng.seg_candidate(dt[0], "D_T", it)
                eng.split(dt[0])
            else:
                sid = eng.top_db()
                if sid is not None:
                    cand = eng.seg_candidate(sid, "D_B", it)
                    eng.split(sid)
                else:
                    t = eng.top_c()
                    if t is None:
                        break
                    cand = eng.tri_candidate(t, it)
                    if check and not eng.periodic and eng.encroaches_any_brute(cand.x, cand.y):
                        raise InvariantViolation(f"circumcenter {cand.location} encroaches")
                    eng.insert_circumcenter(t)
            entry = LogEntry(cand, it)
            log.entries.append(entry)
            if observer is not None:
                observer(eng, entry)
            it += 1
        if check:
            _final_check(eng)
        return eng.mesh(), log
    finally:
        eng.close()


def _final_check(eng):
    if eng.poor_triangles():
        raise InvariantViolation("poor triangles remain")
    if not eng.periodic:
        for sid in eng.seg:
            if eng.segment_encroached_brute(sid):
                raise InvariantViolation(f"segment {sid} still encroached")


def replay(domain, log: InsertionLog, *, threads: int = 1):
    """Re-run ``log`` in order, checking each step is a legal sequential move."""
    eng = Engine(domain, log.rule, threads=threads)
    try:
        for step, entry in enumerate(log.entries):
            c = entry.candidate
            eng.flush_b()
            if c.kind == "C":
                t = eng.by_key.get(c.source)
                if t is None:
                    raise NotSequentializable(step, "triangle is not in the mesh")
                rec = eng.recs[t]
                if not eng.is_poor(rec):
                    raise NotSequentializable(step, "triangle is not poor")
                if (rec.x, rec.y) != (c.x, c.y):
                    raise NotSequentializable(step, "location differs from circumcenter")
                if not eng.periodic and (rec.enc or eng.encroaches_any_brute(rec.x, rec.y)):
                    raise NotSequentializable(step, "circumcenter encroaches a subsegment")
                eng.insert_circumcenter(t)
            elif c.kind in ("D_T", "D_B"):
                sid = eng.seg_key.get(c.source)
                if sid is None:
                    raise NotSequentializable(step, "segment is not live")
                if not (sid in eng.db or eng.segment_encroached(sid)):
                    raise NotSequentializable(step, "segment is not encroached")
                m = ((c.source[0][0] + c.source[1][0]) / 2.0, (c.source[0][1] + c.source[1][1]) / 2.0)
                if m != (c.x, c.y):
                    raise NotSequentializable(step, "location is not the midpoint")
                eng.split(sid)
            else:
                raise NotSequentializable(step, f"kind {c.kind} is never inserted")
        return eng.mesh()
    finally:
        eng.close()


__all__ = ["CandidateSets", "InsertionLog", "classify_candidates", "is_poor", "replay",
           "seq_refine"]
