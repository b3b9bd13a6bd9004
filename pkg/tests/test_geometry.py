import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from delref.errors import DegenerateSegment, DegenerateTriangle
from delref.geometry import (Circle, Orientation, Point, circles_conflict,
                             circumcenter_diametral_conflict, circumcircle, diametral_circle,
                             encroaches, encroaches_segment, in_circle, orientation,
                             radius_edge_ratio)

TRI = ((0, 0), (1, 0), (0, 1))


@pytest.mark.parametrize("pts, expected", [
    (((0, 0), (1, 0), (0, 1)), Orientation.POSITIVE),
    (((0, 0), (1, 0), (2, 0)), Orientation.ZERO),
    (((0, 0), (0, 1), (1, 0)), Orientation.NEGATIVE),
])
def test_orientation(pts, expected):
    assert orientation(*pts) == expected


@pytest.mark.parametrize("p, expected", [
    ((1, 1), Orientation.ZERO),
    ((0.5, 0.5), Orientation.POSITIVE),
    ((0.4, 0.4), Orientation.POSITIVE),
    ((2, 2), Orientation.NEGATIVE),
])
def test_in_circle(p, expected):
    assert in_circle(*TRI, p) == expected


def test_in_circle_clockwise_input_gives_same_answer():
    a, b, c = TRI
    assert in_circle(a, c, b, (0.4, 0.4)) == Orientation.POSITIVE
    assert in_circle(a, c, b, (2, 2)) == Orientation.NEGATIVE


def test_in_circle_collinear_raises():
    with pytest.raises(DegenerateTriangle):
        in_circle((0, 0), (1, 0), (2, 0), (5, 5))


def test_circumcircle_examples():
    c = circumcircle(*TRI)
    assert c.center == (0.5, 0.5)
    assert c.radius == pytest.approx(math.sqrt(2) / 2)
    c = circumcircle((0, 0), (2, 0), (1, 1))
    assert c.center == (1, 0) and c.radius == pytest.approx(1.0)
    with pytest.raises(DegenerateTriangle):
        circumcircle((0, 0), (1, 0), (2, 0))


coord = st.floats(-100, 100, allow_nan=False, allow_infinity=False)
point = st.tuples(coord, coord)


@given(point, point, point)
def test_circumcircle_argument_order_independent(a, b, c):
    area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    assume(abs(area2) > 1e-6)
    assert circumcircle(a, b, c) == circumcircle(c, a, b) == circumcircle(b, a, c)


def test_diametral_circle():
    assert diametral_circle((0, 0), (1, 0)) == Circle(Point(0.5, 0), 0.5)
    assert diametral_circle((0, 0), (0, 2)) == Circle(Point(0, 1), 1)
    with pytest.raises(DegenerateSegment):
        diametral_circle((3, 3), (3, 3))


def test_encroaches():
    d = diametral_circle((0, 0), (1, 0))
    assert encroaches((0.5, 0.3), d)
    assert not encroaches((0.5, 0.5), d)
    assert not encroaches((2, 0), d)
    assert encroaches_segment((0.5, 0.3), (0, 0), (1, 0))
    assert not encroaches_segment((0.5, 0.5), (0, 0), (1, 0))


def test_circles_conflict():
    assert circles_conflict(Circle((0, 0), 1), Circle((0.8, 0), 1))
    assert not circles_conflict(Circle((0, 0), 1), Circle((3, 0), 1))
    assert not circles_conflict(Circle((0, 0), 1), Circle((0.9, 0), 0.5))


def test_circumcenter_diametral_conflict():
    c = Circle((0, 0), 1)
    assert circumcenter_diametral_conflict(c, Circle((0.5, 0), 0.8))
    assert not circumcenter_diametral_conflict(c, Circle((0.5, 0), 0.5))
    assert not circumcenter_diametral_conflict(c, Circle((2, 0), 0.9))


radius = st.floats(0.01, 10)


@given(point, radius, point, radius)
def test_circles_conflict_symmetric(p, r, q, s):
    assert circles_conflict(Circle(p, r), Circle(q, s)) == circles_conflict(Circle(q, s), Circle(p, r))


def test_radius_edge_ratio():
    h = math.sqrt(3) / 2
    assert radius_edge_ratio((0, 0), (1, 0), (0.5, h)) == pytest.approx(1 / math.sqrt(3))
    assert radius_edge_ratio(*TRI) == pytest.approx(math.sqrt(2) / 2)
    # R = abc / (4 * area) with area 0.025
    side = math.hypot(0.5, 0.05)
    expected = (side * side * 1.0 / (4 * 0.025)) / side
    assert radius_edge_ratio((0, 0), (1, 0), (0.5, 0.05)) == pytest.approx(expected)
    assert expected == pytest.approx(5.025, abs=1e-3)
    with pytest.raises(DegenerateTriangle):
        radius_edge_ratio((0, 0), (1, 0), (2, 0))
