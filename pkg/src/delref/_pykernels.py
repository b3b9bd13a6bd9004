"""Pure-Python predicate kernels (fallback for the compiled module)."""

from ._exact import diametral_exact, incircle_exact, orient2d_exact

_EPS = 2.0 ** -53
_CCW = (3.0 + 16.0 * _EPS) * _EPS
_ICC = (10.0 + 96.0 * _EPS) * _EPS
_DOT = (5.0 + 64.0 * _EPS) * _EPS


def orient2d(ax, ay, bx, by, cx, cy):
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    bound = _CCW * (abs(detleft) + abs(detright))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return orient2d_exact(ax, ay, bx, by, cx, cy)


def incircle(ax, ay, bx, by, cx, cy, dx, dy):
    adx = ax - dx
    ady = ay - dy
    bdx = bx - dx
    bdy = by - dy
    cdx = cx - dx
    cdy = cy - dy
    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    cdxady = cdx * ady
    adxcdy = adx * cdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    bound = _ICC * permanent
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return incircle_exact(ax, ay, bx, by, cx, cy, dx, dy)


def diametral(ax, ay, bx, by, px, py):
    t1 = (ax - px) * (bx - px)
    t2 = (ay - py) * (by - py)
    v = t1 + t2
    bound = _DOT * (abs(t1) + abs(t2))
    if v > bound:
        return 1
    if -v > bound:
        return -1
    return diametral_exact(ax, ay, bx, by, px, py)


def circumcenter(ax, ay, bx, by, cx, cy):
    """Return (ux, uy, r2); caller guarantees a non-degenerate triangle."""
    bx -= ax
    by -= ay
    cx -= ax
    cy -= ay
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    d = 2.0 * (bx * cy - by * cx)
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return ax + ux, ay + uy, ux * ux + uy * uy
