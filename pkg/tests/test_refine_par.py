import math

import pytest

from delref.analysis import (check_class_locality, check_conflict_lemma, check_encroach_ratio,
                             check_shrinkage, poor_triangles_exact)
from delref.domain import PeriodicPointSet
from delref.errors import ConfigError
from delref.fixtures import PSLG_CORPUS, graded_square, random_periodic, unit_square
from delref.model import QualityRule
from delref.refine_par import (Trace, flatten, parallel_chew_pps, parallel_chew_pslg,
                               parallel_generic_pps, parallel_generic_pslg, parallel_ruppert_pps,
                               parallel_ruppert_pslg, triangle_class)
from delref.refine_seq import replay


def _replays(m, tr):
    assert replay(tr.domain, flatten(tr)).canonical() == m.canonical()


@pytest.mark.parametrize("l2, s2, i", [(1, 1, 1), (1.99, 1, 1), (2, 1, 2), (4, 1, 3), (0.5, 1, 1)])
def test_triangle_class(l2, s2, i):
    assert triangle_class(l2, s2) == i


@pytest.mark.parametrize("name", sorted(PSLG_CORPUS))
def test_parallel_ruppert_corpus(name):
    m, tr = parallel_ruppert_pslg(PSLG_CORPUS[name](), check=True)
    assert poor_triangles_exact(m) == []
    assert check_conflict_lemma(tr) == [] and check_encroach_ratio(tr) == []
    assert check_class_locality(tr) == []
    _replays(m, tr)


@pytest.mark.parametrize("fn", [parallel_chew_pps, parallel_ruppert_pps], ids=["chew", "ruppert"])
def test_periodic_drivers(fn):
    m, tr = fn(random_periodic(30, 5), check=True)
    assert poor_triangles_exact(m) == []
    assert check_shrinkage(tr) == []
    assert tr.meta["periodic"]
    _replays(m, tr)


def test_generic_any_independent_policy():
    d = graded_square()
    m, tr = parallel_generic_pslg(d, QualityRule(), "any-independent", check=True)
    assert poor_triangles_exact(m) == []
    _replays(m, tr)
    m2, tr2 = parallel_generic_pslg(d, QualityRule(), "maximal")
    assert len(tr2.rounds) <= len(tr.rounds)


def test_unknown_policy():
    with pytest.raises(ConfigError):
        parallel_generic_pps(random_periodic(5, 1), mis_policy="greedy")


def test_wrong_domain_type():
    with pytest.raises(ConfigError):
        parallel_ruppert_pps(unit_square())
    with pytest.raises(ConfigError):
        parallel_ruppert_pslg(random_periodic(5, 1))


def test_good_mesh_needs_zero_rounds():
    m, tr = parallel_ruppert_pslg(unit_square())
    assert len(tr) == 0 and len(m.triangles) == 2
    assert tr.radius_series() == [tr.initial_max_radius]


def test_single_point_torus():
    m, tr = parallel_chew_pps(PeriodicPointSet.create([(0.5, 0.5)]))
    assert poor_triangles_exact(m) == []
    _replays(m, tr)


def test_chew_pslg_scale_parameter():
    m, tr = parallel_chew_pslg(graded_square())
    assert tr.algorithm == "par-chew" and 0 < tr.s < tr.L
    _replays(m, tr)


@pytest.mark.parametrize("threads", [2, 8])
def test_thread_count_is_invisible(threads):
    d = graded_square()
    a, ta = parallel_ruppert_pslg(d)
    b, tb = parallel_ruppert_pslg(d, threads=threads)
    assert a == b and ta.to_json() == tb.to_json()


def test_radius_series_decreases_overall():
    _, tr = parallel_chew_pps(random_periodic(40, 8))
    series = tr.radius_series()
    assert series[-1] <= series[0]
    assert all(math.isfinite(r) for r in series)


def test_trace_json_shape():
    _, tr = parallel_ruppert_pslg(graded_square())
    doc = tr.to_json()
    assert isinstance(tr, Trace)
    assert doc["algorithm"] == "par-ruppert" and len(doc["rounds"]) == len(tr)
    assert all(r["inserted_count"] > 0 for r in doc["rounds"])
    assert all(len(r["label"]) >= 1 for r in doc["rounds"])


def test_chew_rounds_linear_in_log():
    from delref.analysis import r_squared
    from delref.fixtures import CHEW_FAMILY, feature_square

    xs, ys = [], []
    for f in CHEW_FAMILY:
        _, tr = parallel_chew_pslg(feature_square(f))
        xs.append(math.log(1 / tr.s))
        ys.append(len(tr.rounds))
    assert ys == sorted(ys) and ys[0] < ys[-1]
    assert r_squared(xs, ys) >= 0.9
