"""Immutable mesh snapshot produced by every refinement driver."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Mesh:
    vertices: tuple
    triangles: tuple
    segments: tuple = ()
    # periodic meshes: per triangle, the lattice offset of each vertex
    offsets: tuple | None = None

    @property
    def periodic(self) -> bool:
        return self.offsets is not None

    def triangle_coords(self) -> list:
        V = self.vertices
        out = []
        if self.offsets is None:
            for a, b, c in self.triangles:
                out.append((V[a][0], V[a][1], V[b][0], V[b][1], V[c][0], V[c][1]))
            return out
        for (a, b, c), ((oa, pa), (ob, pb), (oc, pc)) in zip(self.triangles, self.offsets):
            out.append((V[a][0] + oa, V[a][1] + pa, V[b][0] + ob, V[b][1] + pb,
                        V[c][0] + oc, V[c][1] + pc))
        return out

    def edges(self) -> list:
        """Unique edges as (i, j, (dx, dy)); (dx, dy) is the lattice offset
        of j relative to i (always (0, 0) for planar meshes)."""
        seen = set()
        offs = self.offsets or [((0, 0),) * 3] * len(self.triangles)
        for tri, off in zip(self.triangles, offs):
            for k in range(3):
                i, j = tri[k], tri[(k + 1) % 3]
                d = (off[(k + 1) % 3][0] - off[k][0], off[(k + 1) % 3][1] - off[k][1])
                if i > j or (i == j and d < (0, 0)):
                    i, j, d = j, i, (-d[0], -d[1])
                seen.add((i, j, d))
        return sorted(seen)

    def edge_coords(self) -> list:
        V = self.vertices
        return [(V[i][0], V[i][1], V[j][0] + d[0], V[j][1] + d[1])
                for i, j, d in self.edges()]

    def canonical(self):
        """Labeling-independent form used for exact mesh comparison."""
        tris = []
        for c in self.triangle_coords():
            pts = [(c[0], c[1]), (c[2], c[3]), (c[4], c[5])]
            tris.append(tuple(sorted(pts)))
        segs = sorted(tuple(sorted((tuple(self.vertices[i]), tuple(self.vertices[j]))))
                      for i, j in self.segments)
        return (tuple(sorted(map(tuple, self.vertices))), tuple(sorted(tris)), tuple(segs))
