import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from delref import _exact, kernels


def _sign(v):
    return (v > 0) - (v < 0)


def _orient_oracle(ax, ay, bx, by, cx, cy):
    ax, ay, bx, by, cx, cy = map(Fraction, (ax, ay, bx, by, cx, cy))
    return _sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def _incircle_oracle(ax, ay, bx, by, cx, cy, px, py):
    rows = []
    for x, y in ((ax, ay), (bx, by), (cx, cy)):
        dx, dy = Fraction(x) - Fraction(px), Fraction(y) - Fraction(py)
        rows.append((dx, dy, dx * dx + dy * dy))
    (a, b, c), (d, e, f), (g, h, i) = rows
    return _sign(a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g))


def _near_degenerate(rng):
    """Three points nudged off a line by a few ulps."""
    ax, ay = rng.uniform(-1, 1), rng.uniform(-1, 1)
    bx, by = rng.uniform(-1, 1), rng.uniform(-1, 1)
    t = rng.uniform(-2, 2)
    cx = ax + t * (bx - ax)
    cy = ay + t * (by - ay)
    for _ in range(rng.randrange(3)):
        cx = cx + rng.choice((-1, 1)) * abs(cx) * 2 ** -52
    return ax, ay, bx, by, cx, cy


def test_orient_exact_on_near_degenerate(backend):
    rng = random.Random(5)
    for _ in range(20000):
        pts = _near_degenerate(rng)
        assert backend.orient2d(*pts) == _orient_oracle(*pts)


def test_incircle_exact_on_near_cocircular(backend):
    rng = random.Random(6)
    for _ in range(5000):
        ax, ay, bx, by, cx, cy = _near_degenerate(rng)
        # a fourth point on the circle through three grid points, perturbed
        px, py = rng.choice([(1.0, 1.0), (0.0, 1.0)])
        base = (0.0, 0.0, 1.0, 0.0, px, py)
        q = (1.0 - px, py + rng.choice((0.0, 2 ** -50, -2 ** -50)))
        assert backend.incircle(*base, *q) == _incircle_oracle(*base, *q)
        if _orient_oracle(ax, ay, bx, by, cx, cy) != 0:
            p = (rng.uniform(-1, 1), rng.uniform(-1, 1))
            assert backend.incircle(ax, ay, bx, by, cx, cy, *p) == \
                _incircle_oracle(ax, ay, bx, by, cx, cy, *p)


coord = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@given(*(coord,) * 6)
def test_orient_matches_exact(ax, ay, bx, by, cx, cy):
    assert kernels.orient2d(ax, ay, bx, by, cx, cy) == _orient_oracle(ax, ay, bx, by, cx, cy)
    assert _exact.orient2d_exact(ax, ay, bx, by, cx, cy) == _orient_oracle(ax, ay, bx, by, cx, cy)


@given(st.lists(coord, min_size=8, max_size=8))
def test_incircle_matches_exact(v):
    assert kernels.incircle(*v) == _incircle_oracle(*v)


@given(*(coord,) * 6)
def test_diametral_sign(ax, ay, bx, by, px, py):
    d = (Fraction(ax) - Fraction(px)) * (Fraction(bx) - Fraction(px)) + \
        (Fraction(ay) - Fraction(py)) * (Fraction(by) - Fraction(py))
    assert kernels.diametral(ax, ay, bx, by, px, py) == _sign(d)


def test_backends_agree_on_circumcenter(backend):
    rng = random.Random(7)
    from delref import _pykernels
    for _ in range(2000):
        v = [rng.uniform(-5, 5) for _ in range(6)]
        if _orient_oracle(*v) == 0:
            continue
        assert backend.circumcenter(*v) == _pykernels.circumcenter(*v)


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
