# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled predicate kernels; same contract as ``_pykernels``."""

from libc.math cimport fabs

from ._exact import diametral_exact, incircle_exact, orient2d_exact

cdef double _EPS = 1.1102230246251565e-16
cdef double _CCW = (3.0 + 16.0 * _EPS) * _EPS
cdef double _ICC = (10.0 + 96.0 * _EPS) * _EPS
cdef double _DOT = (5.0 + 64.0 * _EPS) * _EPS


cpdef int orient2d(double ax, double ay, double bx, double by,
                   double cx, double cy):
    cdef double detleft = (ax - cx) * (by - cy)
    cdef double detright = (ay - cy) * (bx - cx)
    cdef double det = detleft - detright
    cdef double bound = _CCW * (fabs(detleft) + fabs(detright))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return orient2d_exact(ax, ay, bx, by, cx, cy)


cpdef int incircle(double ax, double ay, double bx, double by,
                   double cx, double cy, double dx, double dy):
    cdef double adx = ax - dx
    cdef double ady = ay - dy
    cdef double bdx = bx - dx
    cdef double bdy = by - dy
    cdef double cdx = cx - dx
    cdef double cdy = cy - dy
    cdef double bdxcdy = bdx * cdy
    cdef double cdxbdy = cdx * bdy
    cdef double cdxady = cdx * ady
    cdef double adxcdy = adx * cdy
    cdef double adxbdy = adx * bdy
    cdef double bdxady = bdx * ady
    cdef double alift = adx * adx + ady * ady
    cdef double blift = bdx * bdx + bdy * bdy
    cdef double clift = cdx * cdx + cdy * cdy
    cdef double det = (alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy)
                       + clift * (adxbdy - bdxady))
    cdef double permanent = ((fabs(bdxcdy) + fabs(cdxbdy)) * alift
                             + (fabs(cdxady) + fabs(adxcdy)) * blift
                             + (fabs(adxbdy) + fabs(bdxady)) * clift)
    cdef double bound = _ICC * permanent
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return incircle_exact(ax, ay, bx, by, cx, cy, dx, dy)


cpdef int diametral(double ax, double ay, double bx, double by,
                    double px, double py):
    cdef double t1 = (ax - px) * (bx - px)
    cdef double t2 = (ay - py) * (by - py)
    cdef double v = t1 + t2
    cdef double bound = _DOT * (fabs(t1) + fabs(t2))
    if v > bound:
        return 1
    if -v > bound:
        return -1
    return diametral_exact(ax, ay, bx, by, px, py)


cpdef tuple circumcenter(double ax, double ay, double bx, double by,
                         double cx, double cy):
    bx -= ax
    by -= ay
    cx -= ax
    cy -= ay
    cdef double b2 = bx * bx + by * by
    cdef double c2 = cx * cx + cy * cy
    cdef double d = 2.0 * (bx * cy - by * cx)
    cdef double ux = (cy * b2 - by * c2) / d
    cdef double uy = (bx * c2 - cx * b2) / d
    return (ax + ux, ay + uy, ux * ux + uy * uy)
