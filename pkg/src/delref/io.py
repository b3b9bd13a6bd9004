"""Triangle-style .poly/.node/.ele files, periodic point files and SVG output."""

from __future__ import annotations

import json
import math
import os
import warnings
from xml.sax.saxutils import quoteattr

from .domain import PeriodicPointSet, Pslg, check_valid, convex_hull
from .errors import EmptyMesh, InvalidDomain, IoError, ParseError
from .mesh import Mesh


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _lines(path):
    """(line number, tokens) for every non-blank, non-comment line."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.readlines()
    except OSError as exc:
        raise IoError(f"{path}: {exc.strerror or exc}") from exc
    for n, line in enumerate(raw, 1):
        toks = line.split("#", 1)[0].split()
        if toks:
            yield n, toks


class _Cursor:
    def __init__(self, path):
        self.rows = list(_lines(path))
        self.pos = 0
        self.last = 0

    def next(self, what):
        if self.pos >= len(self.rows):
            raise ParseError(f"unexpected end of file, expected {what}", self.last + 1)
        n, toks = self.rows[self.pos]
        self.pos += 1
        self.last = n
        return n, toks

    def done(self):
        return self.pos >= len(self.rows)


def _int(tok, n, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"bad {what} {tok!r}", n) from None


def _float(tok, n, what):
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"bad {what} {tok!r}", n) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite {what} {tok!r}", n)
    return v


def _read_nodes(cur, header_n, toks):
    count = _int(toks[0], header_n, "vertex count")
    dim = _int(toks[1], header_n, "dimension") if len(toks) > 1 else 2
    if count < 0 or dim != 2:
        raise ParseError("expected a non-negative count and dimension 2", header_n)
    verts, ids = [], []
    for _ in range(count):
        n, row = cur.next("a vertex line")
        if len(row) < 3:
            raise ParseError("vertex line needs index x y", n)
        ids.append(_int(row[0], n, "vertex index"))
        verts.append((_float(row[1], n, "x"), _float(row[2], n, "y")))
    base = ids[0] if ids else 0
    if ids != list(range(base, base + count)) or base not in (0, 1):
        raise ParseError("vertex indices must be consecutive from 0 or 1", header_n)
    return verts, base


def read_poly(path) -> Pslg:
    """Parse a .poly file; hulls are synthesized when no segment is given."""
    cur = _Cursor(path)
    n, toks = cur.next("the vertex header")
    verts, base = _read_nodes(cur, n, toks)
    n, toks = cur.next("the segment header")
    count = _int(toks[0], n, "segment count")
    if count < 0:
        raise ParseError("negative segment count", n)
    segs = []
    for _ in range(count):
        m, row = cur.next("a segment line")
        if len(row) < 3:
            raise ParseError("segment line needs index v1 v2", m)
        a = _int(row[1], m, "vertex reference") - base
        b = _int(row[2], m, "vertex reference") - base
        for v in (a, b):
            if not 0 <= v < len(verts):
                raise ParseError(f"segment references vertex {v + base} of {len(verts)}", m)
        segs.append((a, b))
    if not cur.done():
        n, toks = cur.next("the hole header")
        holes = _int(toks[0], n, "hole count")
        if holes:
            warnings.warn(f"{path}: {holes} hole(s) ignored", stacklevel=2)
        rest = len(cur.rows) - cur.pos
        if rest:
            warnings.warn(f"{path}: trailing hole/region data ignored", stacklevel=2)
    if not segs:
        if len(verts) < 3:
            raise InvalidDomain("need at least three vertices to synthesize a hull")
        if len(set(verts)) != len(verts):
            raise InvalidDomain("duplicate vertices")
        x0, y0 = verts[0]
        x1, y1 = verts[1]
        if all((x1 - x0) * (y - y0) == (y1 - y0) * (x - x0) for x, y in verts):
            raise InvalidDomain("all vertices are collinear")
        hull = convex_hull(verts)
        segs = list(zip(hull, hull[1:] + hull[:1]))
    d = Pslg.create(verts, segs)
    return check_valid(d)


def write_poly(path, d: Pslg):
    out = [f"{len(d.vertices)} 2 0 0"]
    out += [f"{k} {_fmt(p.x)} {_fmt(p.y)}" for k, p in enumerate(d.vertices)]
    out.append(f"{len(d.segments)} 0")
    out += [f"{k} {i} {j}" for k, (i, j) in enumerate(d.segments)]
    out.append("0")
    _write(path, "\n".join(out) + "\n")


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"{path}: {exc.strerror or exc}") from exc


def write_mesh(stem, m: Mesh) -> list:
    """Write stem.node, stem.ele and stem.poly (segments); returns the paths.

    Periodic meshes store each triangle's vertex lattice offsets as six
    integer attributes in the .ele file.
    """
    if not m.triangles:
        raise EmptyMesh("refusing to write an empty mesh")
    stem = os.fspath(stem)
    on_seg = {v for s in m.segments for v in s}
    node = [f"{len(m.vertices)} 2 0 1"]
    node += [f"{k} {_fmt(x)} {_fmt(y)} {int(k in on_seg)}" for k, (x, y) in enumerate(m.vertices)]
    if m.offsets is None:
        ele = [f"{len(m.triangles)} 3 0"]
        ele += [f"{k} {a} {b} {c}" for k, (a, b, c) in enumerate(m.triangles)]
    else:
        ele = [f"{len(m.triangles)} 3 6"]
        for k, ((a, b, c), off) in enumerate(zip(m.triangles, m.offsets)):
            attrs = " ".join(str(v) for o in off for v in o)
            ele.append(f"{k} {a} {b} {c} {attrs}")
    poly = ["0 2 0 1", f"{len(m.segments)} 0"]
    poly += [f"{k} {i} {j}" for k, (i, j) in enumerate(m.segments)]
    poly.append("0")
    paths = [stem + ".node", stem + ".ele", stem + ".poly"]
    for p, body in zip(paths, (node, ele, poly)):
        _write(p, "\n".join(body) + "\n")
    return paths


def read_mesh(stem) -> Mesh:
    stem = os.fspath(stem)
    cur = _Cursor(stem + ".node")
    n, toks = cur.next("the vertex header")
    verts, base = _read_nodes(cur, n, toks)
    cur = _Cursor(stem + ".ele")
    n, toks = cur.next("the triangle header")
    count = _int(toks[0], n, "triangle count")
    nattr = _int(toks[2], n, "attribute count") if len(toks) > 2 else 0
    tris, offs = [], []
    for _ in range(count):
        m, row = cur.next("a triangle line")
        if len(row) < 4 + nattr:
            raise ParseError("triangle line too short", m)
        tri = tuple(_int(t, m, "vertex reference") - base for t in row[1:4])
        if any(not 0 <= v < len(verts) for v in tri):
            raise ParseError("triangle references a missing vertex", m)
        tris.append(tri)
        if nattr == 6:
            a = [_int(t, m, "offset") for t in row[4:10]]
            offs.append(((a[0], a[1]), (a[2], a[3]), (a[4], a[5])))
    segs = []
    if os.path.exists(stem + ".poly"):
        cur = _Cursor(stem + ".poly")
        cur.next("the vertex header")
        n, toks = cur.next("the segment header")
        for _ in range(_int(toks[0], n, "segment count")):
            m, row = cur.next("a segment line")
            segs.append((_int(row[1], m, "vertex reference") - base,
                         _int(row[2], m, "vertex reference") - base))
    return Mesh(tuple(verts), tuple(tris), tuple(segs), tuple(offs) if nattr == 6 else None)


def read_periodic(path) -> PeriodicPointSet:
    """One ``x y`` pair per line, each coordinate in [0, 1)."""
    pts = []
    for n, toks in _lines(path):
        if len(toks) != 2:
            raise ParseError("expected 'x y'", n)
        x, y = _float(toks[0], n, "x"), _float(toks[1], n, "y")
        if not (0.0 <= x < 1.0 and 0.0 <= y < 1.0):
            raise ParseError(f"point ({x}, {y}) outside [0,1)^2", n)
        pts.append((x, y))
    return PeriodicPointSet.create(pts)


def write_json(path, doc):
    _write(path, json.dumps(doc, indent=1, sort_keys=True) + "\n")


def render_svg(path, m: Mesh, *, segments: bool = False, poor_beta: float | None = None,
               size: float = 800.0) -> int:
    """Draw one polyline per edge; returns the number of edge elements.

    ``segments`` colors boundary subsegments, ``poor_beta`` fills the
    triangles whose radius-edge ratio exceeds it.
    """
    from .analysis import poor_triangles_exact

    if not m.triangles:
        raise EmptyMesh("nothing to render")
    edges = m.edge_coords()
    xs = [v for e in edges for v in (e[0], e[2])]
    ys = [v for e in edges for v in (e[1], e[3])]
    x0, y0 = min(xs), min(ys)
    span = max(max(xs) - x0, max(ys) - y0) or 1.0
    k = size / span

    def pt(x, y):
        return f"{_fmt(round((x - x0) * k, 6))},{_fmt(round(size - (y - y0) * k, 6))}"

    seg_edges = {tuple(sorted(s)) for s in m.segments} if segments else set()
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size:g}" '
           f'height="{size:g}" viewBox="0 0 {size:g} {size:g}">']
    if poor_beta is not None:
        tris = m.triangle_coords()
        for t in poor_triangles_exact(m, poor_beta):
            c = tris[t]
            pts = " ".join(pt(c[i], c[i + 1]) for i in (0, 2, 4))
            out.append(f'<polygon class="poor" points="{pts}" fill="#f4a6a6" stroke="none"/>')
    for (i, j, d), (ax, ay, bx, by) in zip(m.edges(), edges):
        cls = "segment" if d == (0, 0) and (i, j) in seg_edges else "edge"
        color = "#c0392b" if cls == "segment" else "#222222"
        out.append(f'<polyline class={quoteattr(cls)} points="{pt(ax, ay)} {pt(bx, by)}" '
                   f'fill="none" stroke="{color}" stroke-width="1"/>')
    out.append("</svg>")
    _write(path, "\n".join(out) + "\n")
    return len(edges)


__all__ = ["read_mesh", "read_periodic", "read_poly", "render_svg", "write_json", "write_mesh",
           "write_poly"]
