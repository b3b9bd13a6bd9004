import json
import math

import pytest

from delref.analysis import (MIN_ANGLE_SQRT2, bound_report, check_class_locality,
                             check_conflict_lemma, check_encroach_ratio, check_lfs_ratio,
                             check_shrinkage, chew_pps_ceiling, edge_lfs_profile, fit_rounds,
                             max_splits_per_class, poor_triangles_exact, quality_report,
                             r_squared, ruppert_ceiling, to_json, to_text)
from delref.errors import EmptyMesh
from delref.fixtures import graded_square, unit_square
from delref.mesh import Mesh
from delref.model import QualityRule
from delref.refine_par import RoundRecord, Trace, parallel_ruppert_pslg

H = math.sqrt(3) / 2
EQUILATERAL = Mesh(((0.0, 0.0), (1.0, 0.0), (0.5, H)), ((0, 1, 2),))


def _trace(rounds, algorithm="par-ruppert", L=1.0, s=0.01, meta=None):
    return Trace(algorithm, QualityRule(), None, L, s, 1.0, rounds, meta or {})


def _round(k, conflicts=(), events=(), label=(1,), origins=()):
    return RoundRecord(k, label, 0, [], list(conflicts), 1, 0.5, list(events), list(origins))


def test_equilateral_quality():
    q = quality_report(EQUILATERAL)
    assert q.min_angle == pytest.approx(60.0)
    assert q.max_ratio == pytest.approx(1 / math.sqrt(3))
    assert q.quasi_uniformity == pytest.approx(1.0)
    assert poor_triangles_exact(EQUILATERAL) == []


def test_sliver_is_poor():
    m = Mesh(((0.0, 0.0), (1.0, 0.0), (0.5, 0.05)), ((0, 1, 2),))
    assert poor_triangles_exact(m) == [0]
    assert quality_report(m).min_angle < MIN_ANGLE_SQRT2


def test_min_angle_constant():
    assert MIN_ANGLE_SQRT2 == pytest.approx(20.7048, abs=1e-4)


def test_empty_mesh():
    with pytest.raises(EmptyMesh):
        quality_report(Mesh((), ()))


def test_edge_lfs_profile_on_square():
    m = Mesh(((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)), ((0, 1, 2), (0, 2, 3)),
             ((0, 1), (1, 2), (2, 3), (3, 0)))
    prof = edge_lfs_profile(m, unit_square())
    assert len(prof.ratios) == 5 and sum(prof.histogram) == 5
    assert prof.min > 0
    q = quality_report(m, unit_square())
    assert q.lfs_ratio_max == prof.max


def test_conflict_checker_flags_synthetic_violation():
    tr = _trace([_round(0, [(1.0, 0.6), (0.3, 0.31)]), _round(1, [(1.0, 0.5), (0.1, 0.3)])])
    assert check_conflict_lemma(tr) == [(1, 1.0, 0.5), (1, 0.1, 0.3)]
    assert check_class_locality(tr) == [(1, 0.1, 0.3)]


def test_encroach_checker_is_exact():
    rc = 1.0
    ok = math.nextafter(rc / math.sqrt(2), 2.0)
    tr = _trace([_round(0, events=[(rc, ok), (1.0, 0.7)])])
    assert check_encroach_ratio(tr) == [(0, 1.0, 0.7)]


def test_shrinkage_on_constant_series():
    assert check_shrinkage([1.0] * 200) == list(range(98, 200))
    assert check_shrinkage([1.0] * 98) == []
    halving = [0.5 ** (k / 40) for k in range(300)]
    assert check_shrinkage(halving) == []


def test_lfs_ratio_checker():
    d = unit_square()
    assert check_lfs_ratio(d, d, [(0.5, 0.5), (0.1, 0.2)]) == []
    from delref.domain import split_segment
    e = d
    for _ in range(3):
        e, _ = split_segment(e, e.seg_ids[0])
    assert check_lfs_ratio(d, e, [(0.01, 0.01)])


def test_ceilings():
    # L/s = 100 sqrt(2): 98 * 17.2126... = 1686.8
    assert chew_pps_ceiling(math.sqrt(2), 0.01) == 1687
    assert chew_pps_ceiling(1.0, 0.5) == math.ceil(98 * math.log(2) / math.log(4 / 3))
    assert ruppert_ceiling(1.0, 0.25) == 4 * (81 + 98 * 5)


def test_bound_report_applicability():
    assert bound_report(_trace([], "par-generic")).ceiling is None
    assert bound_report(_trace([], "par-chew")).ceiling is None
    rep = bound_report(_trace([], "par-chew", meta={"periodic": True}))
    assert rep.ceiling == chew_pps_ceiling(1.0, 0.01) and rep.within
    rep = bound_report(_trace([_round(0)], "par-ruppert", L=1.0, s=0.5))
    assert rep.ceiling == ruppert_ceiling(1.0, 0.5)


def test_splits_per_class():
    tr = _trace([_round(0, label=(1, 2, 0), origins=[7, 7, 3]),
                 _round(1, label=(1, 2, 1), origins=[7]),
                 _round(2, label=(1, 3, 0), origins=[7])])
    assert max_splits_per_class(tr) == 3
    assert max_splits_per_class(_trace([])) == 0


def test_fit_and_r_squared():
    xs = [1.0, 2.0, 3.0, 4.0]
    c1, c2, res = fit_rounds(xs, [3.0, 5.0, 7.0, 9.0])
    assert (c1, c2) == pytest.approx((2.0, 1.0))
    assert max(map(abs, res)) < 1e-12
    assert r_squared(xs, [1, 2, 3, 4]) == pytest.approx(1.0)
    assert r_squared(xs, [1, 1, 1, 1]) == 1.0


def test_serialization():
    _, tr = parallel_ruppert_pslg(graded_square())
    rep = bound_report(tr)
    doc = to_json(rep)
    assert doc["type"] == "BoundReport" and doc["within"] is True
    json.dumps(doc)
    text = to_text(quality_report(EQUILATERAL))
    lines = dict(line.split("=", 1) for line in text.splitlines())
    assert lines["triangle_count"] == "1" and float(lines["min_angle"]) == pytest.approx(60)
