"""Named test domains: a PSLG corpus, periodic point sets and scaling families."""

from __future__ import annotations

import math
import random

from .domain import PeriodicPointSet, Pslg


def _ring(pts):
    n = len(pts)
    return [(k, (k + 1) % n) for k in range(n)]


def _polygon(n, r=1.0, phase=0.0):
    return [(r * math.cos(phase + 2 * math.pi * k / n), r * math.sin(phase + 2 * math.pi * k / n))
            for k in range(n)]


def unit_square() -> Pslg:
    return Pslg.create([(0, 0), (1, 0), (1, 1), (0, 1)], _ring(range(4)))


def rectangle(w=6.0, h=1.0) -> Pslg:
    return Pslg.create([(0, 0), (w, 0), (w, h), (0, h)], _ring(range(4)))


def feature_square(f: float) -> Pslg:
    """Unit square with a free interior segment of length f at its center."""
    return Pslg.create([(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5), (0.5 + f, 0.5)],
                       _ring(range(4)) + [(4, 5)])


def graded_square() -> Pslg:
    return feature_square(0.02)


def l_shape() -> Pslg:
    """3x3 square with the reflex corner of a thin L drawn inside."""
    v = [(0, 0), (3, 0), (3, 0.5), (3, 3), (0.5, 3), (0, 3), (0.5, 0.5)]
    return Pslg.create(v, _ring(range(6)) + [(6, 2), (6, 4)])


def nested_squares() -> Pslg:
    v = [(0, 0), (4, 0), (4, 4), (0, 4), (1.3, 1), (1.6, 1.3), (1.3, 1.6), (1, 1.3)]
    return Pslg.create(v, _ring(range(4)) + [(4 + a, 4 + b) for a, b in _ring(range(4))])


def hexagon() -> Pslg:
    v = _polygon(6) + _polygon(6, 0.15, 0.3)
    return Pslg.create(v, _ring(range(6)) + [(6 + a, 6 + b) for a, b in _ring(range(6))])


def octagon_with_square() -> Pslg:
    v = _polygon(8, 2.0, math.pi / 8) + _polygon(4, 0.5, math.pi / 4)
    return Pslg.create(v, _ring(range(8)) + [(8 + a, 8 + b) for a, b in _ring(range(4))])


def cross_square() -> Pslg:
    v = [(0, 0), (1, 0), (1, 1), (0, 1), (0.4, 0.6), (0.3, 0.6), (0.8, 0.6), (0.4, 0.55), (0.4, 0.9)]
    return Pslg.create(v, _ring(range(4)) + [(4, 5), (4, 6), (4, 7), (4, 8)])


def slit_square() -> Pslg:
    v = [(0, 0), (0.5, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.9)]
    return Pslg.create(v, _ring(range(5)) + [(1, 5)])


def near_wall() -> Pslg:
    """A segment running 0.05 above the bottom side, plus loose interior points."""
    v = [(0, 0), (1, 0), (1, 1), (0, 1), (0.2, 0.05), (0.8, 0.05), (0.3, 0.7), (0.75, 0.8)]
    return Pslg.create(v, _ring(range(4)) + [(4, 5)])


PSLG_CORPUS = {
    "unit_square": unit_square,
    "rectangle": rectangle,
    "graded_square": graded_square,
    "l_shape": l_shape,
    "nested_squares": nested_squares,
    "hexagon": hexagon,
    "octagon_with_square": octagon_with_square,
    "cross_square": cross_square,
    "slit_square": slit_square,
    "near_wall": near_wall,
}


def random_periodic(n: int, seed: int) -> PeriodicPointSet:
    rng = random.Random(seed)
    return PeriodicPointSet.create([(rng.random(), rng.random()) for _ in range(n)])


def jittered_grid(k: int = 4, jitter: float = 0.05, seed: int = 3) -> PeriodicPointSet:
    rng = random.Random(seed)
    return PeriodicPointSet.create(
        [((i + 0.5) / k + rng.uniform(-jitter, jitter) / k, (j + 0.5) / k + rng.uniform(-jitter, jitter) / k)
         for i in range(k) for j in range(k)])


def close_pair() -> PeriodicPointSet:
    return PeriodicPointSet.create([(0.2, 0.3), (0.23, 0.31), (0.7, 0.6), (0.5, 0.9)])


PERIODIC_CORPUS = {
    "single_point": lambda: PeriodicPointSet.create([(0.5, 0.5)]),
    "diagonal_pair": lambda: PeriodicPointSet.create([(0.25, 0.25), (0.75, 0.75)]),
    "random_20": lambda: random_periodic(20, 1),
    "random_60": lambda: random_periodic(60, 7),
    "jittered_grid": jittered_grid,
    "close_pair": close_pair,
}

RUPPERT_FAMILY = (0.1, 0.01, 0.001)
CHEW_FAMILY = (0.1, 0.03, 0.01)
