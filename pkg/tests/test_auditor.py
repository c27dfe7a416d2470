from itertools import combinations
from math import comb

import numpy as np
import pytest

from zerosum import auditor
from zerosum.auditor import (
    Statement,
    audit_balanced_construction,
    audit_extremal_k4,
    audit_s1s2,
    audit_threshold_k4,
    structural_agreement,
    triangle_free_lemma_scan,
)
from zerosum.detector import Construction
from zerosum.errors import ArgumentOutOfRange, BudgetExceeded, NotBalanced, ScaleRefused
from zerosum.weightings import SignedWeighting

import oracles


@pytest.mark.parametrize("n", [4, 9])
def test_threshold_scale_refused(n):
    with pytest.raises(ScaleRefused):
        audit_threshold_k4(n)


def test_threshold_n8_needs_opt_in():
    with pytest.raises(ScaleRefused):
        audit_threshold_k4(8)


def test_threshold_n5_report():
    r = audit_threshold_k4(5)
    assert r.ok and r.violations == []
    assert r.total_scanned == 1024
    assert r.statistics["sharpness_witnesses"] == 15
    assert r.statistics["selected_by_min_count"] == r.statistics["selected_by_total_sum"]


def test_threshold_matches_python_bruteforce_n5():
    """Recount every n=5 statistic with the pure-Python oracle."""
    n, h = 5, 5
    free = sharp = sharp_either = selected = 0
    for mask in range(1 << 10):
        w = SignedWeighting.from_mask(n, mask)
        e1 = w.count(1)
        mn = min(e1, 10 - e1)
        selected += mn >= h
        if oracles.k4_free(n, w.weights):
            free += 1
            sharp += e1 == h - 1
            sharp_either += mn == h - 1
    s = audit_threshold_k4(5).statistics
    assert (s["zero_sum_k4_free"], s["sharpness_witnesses"],
            s["sharpness_witnesses_either_side"], s["selected_by_min_count"]) == (
        free, sharp, sharp_either, selected)


def test_negative_control_weakened_threshold():
    # with h lowered by one the extremal weightings themselves become violations
    r = auditor._threshold_sweep(5, 4, workers=1, halve=False)
    assert r.violation_count == 30
    assert r.statistics["theorem_violations"] == 30
    bad = {tuple(v["weights"]) for v in r.violations}
    for weights in bad:
        assert oracles.k4_free(5, weights)
        assert min(weights.count(1), weights.count(-1)) == 4


@pytest.mark.parametrize("n", [5, 6])
def test_halving_equals_full_scan(n):
    full = audit_threshold_k4(n, workers=1)
    half = audit_threshold_k4(n, workers=1, halve=True)
    assert full.to_json() == half.to_json()
    ctl_full = auditor._threshold_sweep(n, n - 1, workers=1, halve=False)
    ctl_half = auditor._threshold_sweep(n, n - 1, workers=1, halve=True)
    assert ctl_full.violation_count > 0
    assert ctl_full.to_json() == ctl_half.to_json()


@pytest.mark.parametrize("cap,chunk", [(5, 1 << 8), (7, 1 << 12), (100, 1 << 10)])
def test_violation_cap_keeps_smallest_masks(monkeypatch, cap, chunk):
    monkeypatch.setattr(auditor, "VIOLATION_CAP", cap)
    monkeypatch.setattr(auditor, "CHUNK", chunk)
    half = auditor._threshold_sweep(6, 4, workers=3, halve=True)
    plain = auditor._threshold_sweep(6, 4, workers=1, halve=False)
    assert half.violation_count == plain.violation_count > cap
    assert len(half.violations) == cap
    assert half.to_json() == plain.to_json()
    masks = [SignedWeighting.from_dict(v).to_mask() for v in plain.violations]
    assert masks == sorted(masks)


def test_reports_do_not_depend_on_workers(monkeypatch):
    monkeypatch.setattr(auditor, "CHUNK", 1 << 10)
    a = audit_threshold_k4(6, workers=1).to_json()
    b = audit_threshold_k4(6, workers=4).to_json()
    c = audit_threshold_k4(6, workers=4).to_json()
    assert a == b == c
    assert audit_extremal_k4(7, workers=1).to_json() == audit_extremal_k4(7, workers=3).to_json()


def test_unrank_colex_enumerates_in_order():
    k = 3
    masks = sorted(sum(1 << i for i in c) for c in combinations(range(7), k))
    assert [auditor._unrank_colex(r, k) for r in range(len(masks))] == masks


def test_extremal_chunk_boundaries(monkeypatch):
    monkeypatch.setattr(auditor, "CHUNK", 97)
    r = audit_extremal_k4(6, workers=2)
    assert r.ok and r.statistics["zero_sum_k4_free"] == 45


@pytest.mark.parametrize("n,profile", [(5, "C4:1+K1:1"), (6, "C4:1+K2:1"), (8, "C4:2")])
def test_extremal_profiles(n, profile):
    r = audit_extremal_k4(n)
    assert r.ok
    assert r.statistics["expected_profile"] == profile
    free_keys = [k for k in r.statistics if k.startswith("free_profile:")]
    assert free_keys == ["free_profile:" + profile]


def test_balanced_clique_neg_21():
    r = audit_balanced_construction(Construction.CLIQUE_NEG, 21, 8)
    assert r.ok
    s = r.statistics
    assert s["a"] == 15 and s["negative_edges"] == s["positive_edges"] == 105
    assert s["zero_sum_free_m"] == [2, 3, 5, 6, 7, 8]
    assert s["zero_sum_m"] == [4]
    assert s["formula_only_m"] == []


def test_balanced_bipartition_9():
    r = audit_balanced_construction("BIPARTITION", 9, 8)
    assert r.ok
    assert r.statistics["zero_sum_free_m"] == [2, 3, 5, 6, 7, 8]
    assert r.statistics["zero_sum_m"] == [4]


def test_balanced_host_itself():
    r = audit_balanced_construction(Construction.CLIQUE_NEG, 4, 4)
    assert r.ok and r.statistics["zero_sum_m"] == [4]


def test_balanced_bruteforce_cross_check():
    from zerosum.weightings import bipartition_weighting
    w = bipartition_weighting(9, 6)
    r = audit_balanced_construction(Construction.BIPARTITION, 9, 8)
    for m in range(2, 9):
        has = bool(oracles.zero_sum_subsets(9, w.weights, m))
        assert (m in r.statistics["zero_sum_m"]) == has


def test_balanced_budget_fallback_and_strict():
    r = audit_balanced_construction(Construction.CLIQUE_NEG, 21, 6, budget=10_000)
    assert r.ok
    assert r.statistics["formula_only_m"] == [5, 6]
    assert r.total_scanned == comb(21, 2) + comb(21, 3) + comb(21, 4)
    with pytest.raises(BudgetExceeded) as info:
        audit_balanced_construction(Construction.CLIQUE_NEG, 21, 6, budget=10_000, strict=True)
    partial = info.value.report
    assert partial.statistics["zero_sum_m"] == [4]
    assert partial.statistics["zero_sum_free_m"] == [2, 3]


def test_balanced_preconditions():
    with pytest.raises(NotBalanced):
        audit_balanced_construction(Construction.CLIQUE_NEG, 20, 4)
    with pytest.raises(NotBalanced):
        audit_balanced_construction(Construction.BIPARTITION, 10, 4)
    with pytest.raises(ArgumentOutOfRange):
        audit_balanced_construction(Construction.BIPARTITION, 9, 10)
    with pytest.raises(ArgumentOutOfRange):
        audit_balanced_construction(Construction.WIDE_RANGE, 7, 4)


def test_balanced_larger_hosts_formula_only():
    r = audit_balanced_construction(Construction.CLIQUE_NEG, 120, 30, budget=10**5)
    assert r.ok
    assert r.statistics["a"] == 85
    assert 21 in r.statistics["zero_sum_m"]


@pytest.mark.parametrize("limit,expected", [(3, [1]), (25, [1, 4]), (10**9, [1, 4])])
def test_s1s2(limit, expected):
    r = audit_s1s2(limit)
    assert r.ok and r.statistics["intersection"] == expected


def test_s1s2_scanned_terms():
    assert audit_s1s2(25).statistics["s1_terms"] == [1, 4, 21]


def test_report_json_is_deterministic():
    a = audit_extremal_k4(6).to_json()
    assert a == audit_extremal_k4(6).to_json()
    assert a.startswith('{\n  "statement": "EXTREMAL_K4",\n  "n": 6,')


def test_structural_agreement_sparse_random():
    # biased densities make K4-free weightings common enough to matter
    rng = np.random.default_rng(20240607)
    for n in (8, 9, 10):
        bits = n * (n - 1) // 2
        for p in (0.05, 0.15, 0.85, 0.95):
            on = rng.random((2000, bits)) < p
            masks = (on * (1 << np.arange(bits, dtype=np.int64))).sum(axis=1)
            res = structural_agreement(n, masks)
            assert res["disagreements"] == 0
            assert res["zero_sum_k4_free"] > 0 or p in (0.15, 0.85)


def test_triangle_free_scan_small():
    for n in range(1, 7):
        s = triangle_free_lemma_scan(n)
        assert s["class_members"] == oracles.allowed_component_graph_count(n)
        assert s.get("edge_bound_failures", 0) == 0
        assert s["max_edges"] == s["h_minus_1"]


def test_triangle_free_scan_matches_python_filter_n5():
    from zerosum.detector import induced_forbidden_scan, is_triangle_free
    from zerosum.weightings import SimpleGraph
    expected = 0
    for g in range(1 << 10):
        graph = SimpleGraph.from_edges(
            5, [p for i, p in enumerate(combinations(range(5), 2)) if g >> i & 1])
        if is_triangle_free(graph) and induced_forbidden_scan(graph) is None:
            expected += 1
    assert triangle_free_lemma_scan(5)["class_members"] == expected
