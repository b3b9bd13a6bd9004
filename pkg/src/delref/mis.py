"""Independence relations between candidates and the grid-bucket MIS."""

from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

from .domain import torus_dist2
from .errors import BelowFloor, OutOfRange
from .geometry import GUARD, circles_conflict, circumcenter_diametral_conflict


def radius_class(r: float, L: float) -> int:
    """h with L / 2**(h+1) < r <= L / 2**h."""
    if not (0 < r <= L):
        raise OutOfRange(f"radius {r} not in (0, {L}]")
    m, e = math.frexp(L / r)
    h = e - 1
    # guard the float division near powers of two
    while h > 0 and not r <= L / 2 ** h:
        h -= 1
    while not L / 2 ** (h + 1) < r:
        h += 1
    return h


def edge_class(length: float, s: float, strict: bool = True) -> int:
    """i with sqrt(2)**(i-1) * s <= length < sqrt(2)**i * s.

    Edges shorter than s are class 1 unless ``strict``.
    """
    if length < s:
        if strict:
            raise BelowFloor(f"edge {length} shorter than s={s}")
        return 1
    return math.frexp((length * length) / (s * s))[1]


def dist2(a, b, torus=False) -> float:
    if torus:
        return torus_dist2(a.x, a.y, b.x, b.y)
    return (a.x - b.x) ** 2 + (a.y - b.y) ** 2


def conflict(a, b, torus=False) -> bool:
    """Two circumcircles conflict when each contains the other's center; a
    circumcircle conflicts with a diametral circle when its center lies in
    the diametral circle. Two diametral circles never conflict."""
    ca, cb = a.is_circumcenter, b.is_circumcenter
    if not (ca or cb):
        return False
    d2 = dist2(a, b, torus)
    if ca and cb:
        return circles_conflict(a.circle, b.circle, d2)
    if ca:
        return circumcenter_diametral_conflict(a.circle, b.circle, d2)
    return circumcenter_diametral_conflict(b.circle, a.circle, d2)


def _lex(c):
    return (c.x, c.y, c.radius, c.kind)


class _Grid:
    def __init__(self, L, origin, torus):
        self.L = L
        self.ox, self.oy = origin
        self.torus = torus
        self._around = {}

    def ncells(self, h):
        return max(1, int(math.floor((2 ** h) / self.L)))

    def cell(self, h, x, y):
        if self.torus:
            n = self.ncells(h)
            return (int(x * n) % n, int(y * n) % n)
        cs = self.L / 2 ** h
        return (math.floor((x - self.ox) / cs), math.floor((y - self.oy) / cs))

    def cells(self, h, X, Y):
        if self.torus:
            n = self.ncells(h)
            return [(int(x * n) % n, int(y * n) % n) for x, y in zip(X, Y)]
        cs = self.L / 2 ** h
        ox, oy, fl = self.ox, self.oy, math.floor
        return [(fl((x - ox) / cs), fl((y - oy) / cs)) for x, y in zip(X, Y)]

    def around(self, h, cell, reach=1):
        key = (h, cell, reach)
        out = self._around.get(key)
        if out is None:
            i, j = cell
            rng = range(-reach, reach + 1)
            if self.torus:
                n = self.ncells(h)
                out = sorted({((i + a) % n, (j + b) % n) for a in rng for b in rng})
            else:
                out = [(i + a, j + b) for a in rng for b in rng]
            self._around[key] = out
        return out


def _classes(cands, L):
    Leff = max(L, max(c.radius for c in cands))
    return Leff, [radius_class(min(c.radius, Leff), Leff) if c.radius > 0 else 60 for c in cands]


def _conflict_fn(X, Y, R2, C, torus):
    """Index-based conflict test, arithmetic identical to ``conflict``."""
    g = 1.0 - GUARD

    def conf(i, j):
        ci = C[i]
        cj = C[j]
        if not (ci or cj):
            return False
        dx = X[i] - X[j]
        dy = Y[i] - Y[j]
        d2 = dx * dx + dy * dy
        if ci and cj:
            return d2 < R2[i] * g and d2 < R2[j] * g
        if ci:
            return d2 < R2[i] * g and R2[i] < 2.0 * R2[j] * g
        return d2 < R2[j] * g and R2[j] < 2.0 * R2[i] * g

    def conf_torus(i, j):
        ci = C[i]
        cj = C[j]
        if not (ci or cj):
            return False
        dx = abs(X[i] - X[j])
        dy = abs(Y[i] - Y[j])
        if dx > 0.5:
            dx = 1.0 - dx
        if dy > 0.5:
            dy = 1.0 - dy
        d2 = dx * dx + dy * dy
        if ci and cj:
            return d2 < R2[i] * g and d2 < R2[j] * g
        if ci:
            return d2 < R2[i] * g and R2[i] < 2.0 * R2[j] * g
        return d2 < R2[j] * g and R2[j] < 2.0 * R2[i] * g

    return conf_torus if torus else conf


def _arrays(cands):
    X = [c.x for c in cands]
    Y = [c.y for c in cands]
    R2 = [c.radius * c.radius for c in cands]
    C = [c.kind in ("B", "C") for c in cands]
    return X, Y, R2, C


def grid_mis(candidates, L: float, torus: bool = False) -> list:
    """Maximal independent subset, deterministic for a given input set."""
    cands = list(candidates)
    if not cands:
        return []
    Leff, hs = _classes(cands, L)
    X, Y, R2, C = _arrays(cands)
    conf = _conflict_fn(X, Y, R2, C, torus)
    lex = [(c.x, c.y, c.radius, c.kind) for c in cands]
    origin = (0.0, 0.0) if torus else (min(X), min(Y))
    grid = _Grid(Leff, origin, torus)
    levels = sorted(set(hs))
    cellof = {h: grid.cells(h, X, Y) for h in levels}
    # chosen candidates by level and cell, split by circle kind
    circ_idx = {}
    diam_idx = {}
    by_class = defaultdict(list)
    for i, h in enumerate(hs):
        by_class[h].append(i)
    order = [h for h in levels if h % 2 == 0] + [h for h in levels if h % 2]
    state = [0] * len(cands)
    chosen = []

    def near(idx, lv, i, reach):
        cells, members = idx[lv]
        # sparse levels are cheaper to scan directly than by cell
        if len(members) <= (2 * reach + 1) ** 2:
            return members
        out = []
        for cell in grid.around(lv, cellof[lv][i], reach):
            out.extend(cells.get(cell, ()))
        return out

    def blocked(i, h):
        for lv in circ_idx:
            for j in near(circ_idx, lv, i, 1):
                if conf(i, j):
                    return True
        if C[i]:
            for lv in diam_idx:
                if lv <= h + 1:
                    for j in near(diam_idx, lv, i, 2):
                        if conf(i, j):
                            return True
        return False

    for h in order:
        cells_h = cellof[h]
        buckets = defaultdict(list)
        for i in by_class[h]:
            buckets[cells_h[i]].append(i)
        for b in buckets.values():
            b.sort(key=lex.__getitem__)
        keys = sorted(buckets, key=lambda k: (k[0] % 3, k[1] % 3, k))
        for cell in keys:
            for i in buckets[cell]:
                if state[i]:
                    continue
                if blocked(i, h):
                    state[i] = 2
                    continue
                state[i] = 1
                chosen.append(i)
                cells, members = (circ_idx if C[i] else diam_idx).setdefault(h, ({}, []))
                cells.setdefault(cell, []).append(i)
                members.append(i)
                for nb in grid.around(h, cell):
                    for j in buckets.get(nb, ()):
                        if state[j] == 0 and conf(i, j):
                            state[j] = 2
    chosen.sort(key=lex.__getitem__)
    return [cands[i] for i in chosen]


def conflict_matrix(candidates, torus: bool = False):
    """Dense boolean conflict matrix (brute force, numpy)."""
    X, Y, R2, C = (np.asarray(a, dtype=float) for a in _arrays(candidates))
    C = C.astype(bool)
    g = 1.0 - GUARD
    dx = X[:, None] - X[None, :]
    dy = Y[:, None] - Y[None, :]
    if torus:
        dx = np.abs(dx)
        dy = np.abs(dy)
        dx = np.minimum(dx, 1.0 - dx)
        dy = np.minimum(dy, 1.0 - dy)
    d2 = dx * dx + dy * dy
    ri = R2[:, None] * g
    rj = R2[None, :] * g
    cc = C[:, None] & C[None, :]
    both = cc & (d2 < ri) & (d2 < rj)
    i_c = C[:, None] & ~C[None, :] & (d2 < ri) & (R2[:, None] < 2.0 * R2[None, :] * g)
    j_c = ~C[:, None] & C[None, :] & (d2 < rj) & (R2[None, :] < 2.0 * R2[:, None] * g)
    m = both | i_c | j_c
    np.fill_diagonal(m, False)
    return m


def verify_mis(candidates, chosen, torus: bool = False):
    """Brute-force (independent, maximal) check over all pairs."""
    cands = list(candidates)
    if not cands:
        return True, not chosen
    ids = {id(c): k for k, c in enumerate(cands)}
    sel = np.zeros(len(cands), dtype=bool)
    for c in chosen:
        sel[ids[id(c)]] = True
    m = conflict_matrix(cands, torus)
    independent = not m[np.ix_(sel, sel)].any()
    maximal = bool((sel | m[:, sel].any(axis=1)).all())
    return independent, maximal


def greedy_mis(candidates, torus: bool = False) -> list:
    """Reference: lexicographic greedy over the whole set (no grid)."""
    chosen = []
    for c in sorted(candidates, key=_lex):
        if not any(conflict(c, o, torus) for o in chosen):
            chosen.append(c)
    return chosen


def conflict_pairs(candidates, L: float, torus: bool = False) -> list:
    """All conflicting pairs among circumcircle candidates."""
    cands = [c for c in candidates if c.is_circumcenter]
    if not cands:
        return []
    Leff, hs = _classes(cands, L)
    X, Y, R2, C = _arrays(cands)
    conf = _conflict_fn(X, Y, R2, C, torus)
    origin = (0.0, 0.0) if torus else (min(X), min(Y))
    grid = _Grid(Leff, origin, torus)
    levels = defaultdict(lambda: defaultdict(list))
    for i, h in enumerate(hs):
        levels[h][grid.cell(h, X[i], Y[i])].append(i)
    pairs = set()
    for i in range(len(cands)):
        for h, cells in levels.items():
            for cell in grid.around(h, grid.cell(h, X[i], Y[i])):
                for j in cells.get(cell, ()):
                    if j > i and conf(i, j):
                        pairs.add((i, j))
    return [(cands[i], cands[j]) for i, j in sorted(pairs)]
