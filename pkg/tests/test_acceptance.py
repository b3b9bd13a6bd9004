"""Acceptance gate: one test per criterion, each logging a PASS/FAIL line."""

import math
import random
import time

import pytest

from delref import io
from delref.analysis import (chew_pps_ceiling, check_conflict_lemma, check_encroach_ratio,
                             check_lfs_ratio, check_shrinkage, fit_rounds, poor_triangles_exact,
                             quality_report, ruppert_ceiling)
from delref.errors import NotSequentializable
from delref.fixtures import PERIODIC_CORPUS, PSLG_CORPUS, RUPPERT_FAMILY, feature_square, graded_square
from delref.mis import grid_mis, verify_mis
from delref.model import Candidate, QualityRule
from delref.preprocess import iteration_cap, preprocess_boundary, sample_points
from delref.refine_par import (flatten, parallel_chew_pps, parallel_chew_pslg,
                               parallel_generic_pps, parallel_generic_pslg, parallel_ruppert_pps,
                               parallel_ruppert_pslg)
from delref.refine_seq import replay, seq_refine

SQRT2 = math.sqrt(2.0)
MIN_ANGLE = 20.70 - 1e-6

PAR_PSLG = {"par-ruppert": parallel_ruppert_pslg, "par-chew": parallel_chew_pslg,
            "par-generic": parallel_generic_pslg}
PAR_PPS = {"par-ruppert": parallel_ruppert_pps, "par-chew": parallel_chew_pps,
           "par-generic": parallel_generic_pps}


def _verdict(log, n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    log.append(line)
    print(line)
    return ok


@pytest.fixture(scope="module")
def traces():
    """Every parallel run over both corpora, keyed by (algorithm, fixture)."""
    out = {}
    for name, make in PSLG_CORPUS.items():
        for algo, fn in PAR_PSLG.items():
            out[algo, name] = fn(make())
    for name, make in PERIODIC_CORPUS.items():
        for algo, fn in PAR_PPS.items():
            out[algo, "torus:" + name] = fn(make())
    return out


def test_criterion_1_quality(acceptance_log):
    bad = []
    slowest = 0.0
    for name, make in PSLG_CORPUS.items():
        for algo in ("seq-ruppert", "par-ruppert"):
            t0 = time.perf_counter()
            if algo == "seq-ruppert":
                m, _ = seq_refine(make(), QualityRule("ruppert", SQRT2))
            else:
                m, _ = parallel_ruppert_pslg(make(), SQRT2)
            dt = time.perf_counter() - t0
            slowest = max(slowest, dt)
            q = quality_report(m)
            if (poor_triangles_exact(m, SQRT2) or q.min_angle < MIN_ANGLE or dt >= 10
                    or q.triangle_count > 50_000):
                bad.append((algo, name, q.min_angle, q.triangle_count, dt))
    ok = _verdict(acceptance_log, 1, not bad,
                  f"{2 * len(PSLG_CORPUS)} runs, slowest {slowest:.2f}s, failures {bad}")
    assert ok


def test_criterion_2_sequentialization(traces, acceptance_log):
    mismatched, refused = [], []
    for key, (m, tr) in traces.items():
        try:
            if replay(tr.domain, flatten(tr)).canonical() != m.canonical():
                mismatched.append(key)
        except NotSequentializable as exc:
            refused.append((key, exc.step))
    ok = _verdict(acceptance_log, 2, not mismatched and not refused,
                  f"{len(traces)} parallel runs replayed, mismatched {mismatched}, "
                  f"not sequentializable {refused}")
    assert ok


def test_criterion_3_conflict_lemma(traces, acceptance_log):
    pairs = sum(len(r.conflicts) for _, tr in traces.values() for r in tr.rounds)
    bad = [(k, v) for k, (_, tr) in traces.items() for v in check_conflict_lemma(tr)]
    ok = _verdict(acceptance_log, 3, pairs > 0 and not bad,
                  f"{pairs} conflicting pairs checked, {len(bad)} violations")
    assert ok


def _random_candidates(rng, n):
    out = []
    for _ in range(n):
        r = math.exp(rng.uniform(math.log(1e-3), math.log(0.5)))
        out.append(Candidate(rng.choice(("C", "B", "D_B")), rng.random(), rng.random(), r,
                             ((rng.random(),),)))
    return out


def test_criterion_4_mis(acceptance_log):
    rng = random.Random(2024)
    sets = [_random_candidates(rng, rng.randint(1, 200)) for _ in range(1000)]
    failures = 0
    t0 = time.perf_counter()
    for cs in sets:
        if verify_mis(cs, grid_mis(cs, 1.0)) != (True, True):
            failures += 1
    dt = time.perf_counter() - t0
    ok = _verdict(acceptance_log, 4, failures == 0 and dt < 5.0,
                  f"1000 sets, {failures} failures, {dt:.2f}s")
    assert ok


def test_criterion_5_chew_periodic(traces, acceptance_log):
    rows, bad = [], []
    for name in PERIODIC_CORPUS:
        _, tr = traces["par-chew", "torus:" + name]
        ceiling = chew_pps_ceiling(tr.L, tr.s) if tr.L > tr.s else 0
        shrink = check_shrinkage(tr, 98, 0.75)
        rows.append(f"{name}={len(tr.rounds)}/{ceiling}")
        if len(tr.rounds) > ceiling or shrink:
            bad.append((name, len(tr.rounds), ceiling, shrink[:3]))
    ok = _verdict(acceptance_log, 5, not bad,
                  f"rounds/ceiling {' '.join(rows)}, violations {bad}")
    assert ok


def test_criterion_6_ruppert_round_growth(acceptance_log):
    xs, rounds, ceil_bad = [], [], []
    for f in RUPPERT_FAMILY:
        _, tr = parallel_ruppert_pslg(feature_square(f))
        ratio = tr.L / tr.s
        xs.append(math.log(ratio) ** 2)
        rounds.append(len(tr.rounds))
        if len(tr.rounds) > ruppert_ceiling(tr.L, tr.s):
            ceil_bad.append((f, len(tr.rounds), ruppert_ceiling(tr.L, tr.s)))
    c1, c2, res = fit_rounds(xs, rounds)
    worst = max(abs(r) for r in res)
    ok = _verdict(acceptance_log, 6, worst <= 0.20 and not ceil_bad,
                  f"f={list(RUPPERT_FAMILY)} rounds={rounds} fit c1={c1:.4g} c2={c2:.4g} "
                  f"residuals={[f'{r:+.1%}' for r in res]} ceiling violations {ceil_bad}")
    assert ok


def test_criterion_7_preprocessing(acceptance_log):
    bad = []
    worst = 0
    for name, make in PSLG_CORPUS.items():
        d = make()
        out, rep = preprocess_boundary(d, samples=0)
        cap = iteration_cap(d)
        worst = max(worst, rep.iterations)
        viol = check_lfs_ratio(d, out, sample_points(d, 1000, seed=7), 1e-9)
        if rep.iterations > cap or viol:
            bad.append((name, rep.iterations, cap, len(viol)))
    ok = _verdict(acceptance_log, 7, not bad,
                  f"{len(PSLG_CORPUS)} fixtures, max {worst} iterations, 1000 lfs samples each, "
                  f"failures {bad}")
    assert ok


def test_criterion_8_encroach_ratio(traces, acceptance_log):
    events = sum(len(r.encroach_events) for _, tr in traces.values() for r in tr.rounds)
    bad = [(k, v) for k, (_, tr) in traces.items() for v in check_encroach_ratio(tr)]
    ok = _verdict(acceptance_log, 8, events > 0 and not bad,
                  f"{events} encroachment events checked, {len(bad)} violations")
    assert ok


def test_criterion_9_size_contrast(acceptance_log):
    d = graded_square()
    counts = {}
    counts["seq-chew"] = len(seq_refine(d, QualityRule("chew", SQRT2))[0].triangles)
    counts["seq-ruppert"] = len(seq_refine(d, QualityRule("ruppert", SQRT2))[0].triangles)
    counts["par-chew"] = len(parallel_chew_pslg(d, SQRT2)[0].triangles)
    counts["par-ruppert"] = len(parallel_ruppert_pslg(d, SQRT2)[0].triangles)
    ok = (counts["seq-chew"] >= 5 * counts["seq-ruppert"]
          and counts["par-chew"] >= 5 * counts["par-ruppert"])
    _verdict(acceptance_log, 9, ok, f"triangle counts {counts}")
    assert ok


def _artifacts(tmp, tag, m, doc):
    stem = str(tmp / tag)
    io.write_mesh(stem, m)
    io.write_json(stem + ".json", doc)
    return b"".join(open(stem + ext, "rb").read() for ext in (".node", ".ele", ".poly", ".json"))


def test_criterion_10_determinism(tmp_path, acceptance_log):
    differ = []
    runs = 0
    jobs = []
    for name, make in PSLG_CORPUS.items():
        for kind in ("ruppert", "chew"):
            jobs.append((f"seq-{kind}", name, make,
                         lambda d, t, kind=kind: seq_refine(d, QualityRule(kind), threads=t)))
        for algo, fn in PAR_PSLG.items():
            jobs.append((algo, name, make, lambda d, t, fn=fn: fn(d, threads=t)))
    for name, make in PERIODIC_CORPUS.items():
        for kind in ("ruppert", "chew"):
            jobs.append((f"seq-{kind}", "torus:" + name, make,
                         lambda d, t, kind=kind: seq_refine(d, QualityRule(kind), threads=t)))
        for algo, fn in PAR_PPS.items():
            jobs.append((algo, "torus:" + name, make, lambda d, t, fn=fn: fn(d, threads=t)))
    for algo, name, make, fn in jobs:
        blobs = []
        for t in (1, 8):
            m, tr = fn(make(), t)
            blobs.append(_artifacts(tmp_path, f"{t}", m, tr.to_json()))
        runs += 1
        if blobs[0] != blobs[1]:
            differ.append((algo, name))
    ok = _verdict(acceptance_log, 10, not differ,
                  f"{runs} algorithm/fixture pairs at 1 vs 8 threads, differing {differ}")
    assert ok
