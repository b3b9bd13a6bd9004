"""Exact sign evaluation on binary floats via Python integers.

Every finite double is m * 2**e, so scaling all inputs to a common
denominator yields integers whose polynomial signs match the real ones.
"""


def _ints(*vals):
    ratios = [float(v).as_integer_ratio() for v in vals]
    den = max(d for _, d in ratios)
    return [n * (den // d) for n, d in ratios]


def _sign(v):
    return (v > 0) - (v < 0)


def orient2d_exact(ax, ay, bx, by, cx, cy):
    ax, ay, bx, by, cx, cy = _ints(ax, ay, bx, by, cx, cy)
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def incircle_exact(ax, ay, bx, by, cx, cy, dx, dy):
    ax, ay, bx, by, cx, cy, dx, dy = _ints(ax, ay, bx, by, cx, cy, dx, dy)
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    det = ((adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
           + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
           + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady))
    return _sign(det)


def diametral_exact(ax, ay, bx, by, px, py):
    """Sign of (a - p).(b - p); negative iff p is strictly inside circle ab."""
    ax, ay, bx, by, px, py = _ints(ax, ay, bx, by, px, py)
    return _sign((ax - px) * (bx - px) + (ay - py) * (by - py))
