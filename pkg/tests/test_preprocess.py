import pytest

from delref.analysis import check_lfs_ratio
from delref.domain import Pslg
from delref.errors import ConfigError
from delref.fixtures import PSLG_CORPUS, unit_square
from delref.preprocess import (boundary_violations, feature_violations, is_feature_conforming,
                               is_strongly_conforming, preprocess_boundary,
                               preprocess_feature_conforming, sample_points)


def parallel_segments(gap=0.1):
    return Pslg.create([(0, 0), (1, 0), (1, 1), (0, 1), (0.2, 0.5), (0.8, 0.5),
                        (0.2, 0.5 + gap), (0.8, 0.5 + gap)],
                       [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (6, 7)])


def test_square_needs_nothing():
    d = unit_square()
    out, rep = preprocess_boundary(d, samples=20)
    assert rep.iterations == 0 and rep.segments_split == 0
    assert out.vertices == d.vertices


def test_parallel_segments_get_split():
    d = parallel_segments()
    assert boundary_violations(d)
    out, rep = preprocess_boundary(d, samples=300)
    assert rep.iterations >= 1 and rep.segments_split >= 2
    assert is_strongly_conforming(out)
    bad = [(p, a, b) for p, a, b in rep.samples if not a / 3 * (1 - 1e-9) <= b <= a * (1 + 1e-9)]
    assert bad == []


def test_vertex_near_side():
    d = Pslg.create([(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.1)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert 0 in boundary_violations(d)
    out, _ = preprocess_boundary(d, samples=0)
    assert is_strongly_conforming(out)
    assert len(out.segments) > 4


def test_touching_diametral_circle_counts():
    # the vertex sits exactly on the bottom side's diametral circle
    d = Pslg.create([(0, 0), (2, 0), (2, 3), (0, 3), (1, 1)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert 0 in boundary_violations(d)


@pytest.mark.parametrize("name", sorted(PSLG_CORPUS))
def test_corpus_lfs_preserved(name):
    d = PSLG_CORPUS[name]()
    out, rep = preprocess_boundary(d, samples=0)
    assert is_strongly_conforming(out)
    assert check_lfs_ratio(d, out, sample_points(d, 200, seed=1)) == []


def test_feature_conforming():
    d = parallel_segments()
    out = preprocess_feature_conforming(d, 3.0)
    assert is_feature_conforming(out, 3.0)
    assert feature_violations(out, 3.0) == []
    assert preprocess_feature_conforming(out, 3.0).vertices == out.vertices


def test_alpha_must_exceed_two():
    with pytest.raises(ConfigError):
        preprocess_feature_conforming(unit_square(), 2.0)


def test_idempotent():
    out, _ = preprocess_boundary(parallel_segments(), samples=0)
    again, rep = preprocess_boundary(out, samples=0)
    assert rep.iterations == 0 and again.vertices == out.vertices


def test_samples_inside_hull_and_deterministic():
    d = PSLG_CORPUS["l_shape"]()
    a = sample_points(d, 50, seed=4)
    assert a == sample_points(d, 50, seed=4)
    xs = [v.x for v in d.vertices]
    ys = [v.y for v in d.vertices]
    assert all(min(xs) <= x <= max(xs) and min(ys) <= y <= max(ys) for x, y in a)
