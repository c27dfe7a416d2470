"""Exhaustive certification of the K4 threshold, its extremal family, the
balanced constructions and the S1/S2 intersection at desk scale.

Sweeps are split into fixed-size chunks of the enumeration index.  Chunks run
on a thread pool (the kernels release the GIL) and are merged in chunk order,
so reports do not depend on the worker count.
"""
from __future__ import annotations

import enum
import json
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb, isqrt
from typing import Any, Callable, Iterable, Optional

import numpy as np

from . import _kernels as K
from .detector import (
    CertificateKind,
    Construction,
    classify_components,
    extremal_profile,
    find_zero_sum_clique,
    is_zero_sum_k4_free,
    zero_sum_ts,
)
from .errors import (
    ArgumentOutOfRange,
    BudgetExceeded,
    InternalInconsistency,
    NotBalanced,
    ScaleRefused,
)
from .pell import iter_bal_clique, s1_members, s1_s2_intersection
from .weightings import (
    SignedWeighting,
    SimpleGraph,
    bipartition_weighting,
    clique_negative_weighting,
    edge_count,
    edge_pair,
    extremal_k4_free_weighting,
    j_for,
    threshold_values,
)

VIOLATION_CAP = 100
DEFAULT_BUDGET = 10**7
CHUNK = 1 << 20
LARGE_N = 8


class Statement(str, enum.Enum):
    THRESHOLD_K4 = "THRESHOLD_K4"
    EXTREMAL_K4 = "EXTREMAL_K4"
    BALANCED_NO_ZS_KM = "BALANCED_NO_ZS_KM"
    S1S2_SCAN = "S1S2_SCAN"


@dataclass
class AuditReport:
    statement: Statement
    scope: str  # "n" or "limit"
    value: int
    total_scanned: int = 0
    violations: list = field(default_factory=list)
    violation_count: int = 0
    statistics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def add_violation(self, item: Any) -> None:
        self.violation_count += 1
        if len(self.violations) < VIOLATION_CAP:
            self.violations.append(item)

    def to_dict(self) -> dict:
        return {
            "statement": self.statement.value,
            self.scope: self.value,
            "total_scanned": self.total_scanned,
            "violation_count": self.violation_count,
            "violations": self.violations,
            "statistics": {k: self.statistics[k] for k in sorted(self.statistics)},
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def default_workers() -> int:
    return os.cpu_count() or 1


def _map_chunks(fn: Callable, args: Iterable, workers: Optional[int]) -> list:
    workers = workers or default_workers()
    args = list(args)
    if workers <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args))


def _ranges(lo: int, hi: int, step: int = CHUNK) -> list[tuple[int, int]]:
    return [(s, min(s + step, hi)) for s in range(lo, hi, step)]


def _check_scale(n: int, allow_large: bool) -> None:
    if not 5 <= n <= LARGE_N:
        raise ScaleRefused(f"exhaustive audit needs 5 <= n <= {LARGE_N}, got {n}")
    if n == LARGE_N and not allow_large:
        raise ScaleRefused(f"n={LARGE_N} sweeps 2^28 weightings; opt in with allow_large (--allow-large)")


# -- threshold ---------------------------------------------------------------


def _threshold_sweep(n: int, h: int, workers: Optional[int], halve: bool) -> AuditReport:
    n_edges = edge_count(n)
    full = K.full_mask(n)
    quads, triples = K.subset_masks(n, 4), K.subset_masks(n, 3)
    top = 1 << (n_edges - 1) if halve else 1 << n_edges

    def run(rng):
        lo, hi = rng
        counters = np.zeros(K.T_NSLOTS, dtype=np.int64)
        first = np.zeros(VIOLATION_CAP, dtype=np.int64)
        last = np.zeros(VIOLATION_CAP, dtype=np.int64)
        nbad = K.threshold_chunk(lo, hi, n_edges, h, quads, triples, full, halve,
                                 VIOLATION_CAP, counters, first, last)
        k = min(nbad, VIOLATION_CAP)
        tail = sorted(last[:k].tolist())
        return counters, first[:k].tolist(), tail

    parts = _map_chunks(run, _ranges(0, top), workers)
    total = np.zeros(K.T_NSLOTS, dtype=np.int64)
    candidates = set()
    for counters, first, tail in parts:
        total += counters
        candidates.update(first)
        if halve:
            candidates.update(full ^ m for m in tail)

    thr = threshold_values(n)
    report = AuditReport(Statement.THRESHOLD_K4, "n", n, total_scanned=1 << n_edges)
    for mask in sorted(candidates)[:VIOLATION_CAP]:
        report.violations.append(SignedWeighting.from_mask(n, mask).to_dict())
    report.violation_count = int(total[K.T_BAD])
    report.statistics = {
        "h": h,
        "g": 2 * h,
        "h_formula": thr.h,
        "selected_by_min_count": int(total[K.T_SELECTED_MIN]),
        "selected_by_total_sum": int(total[K.T_SELECTED_SUM]),
        "filter_mismatches": int(total[K.T_FILTER_MISMATCH]),
        "zero_sum_k4_free": int(total[K.T_K4_FREE]),
        "sharpness_witnesses": int(total[K.T_SHARP_POS]),
        "sharpness_witnesses_either_side": int(total[K.T_SHARP_EITHER]),
        "one_side_triangle_free_failures": int(total[K.T_LEMMA_FAIL]),
        "theorem_violations": int(total[K.T_THEOREM_FAIL]),
    }
    return report


def audit_threshold_k4(n: int, *, allow_large: bool = False, workers: Optional[int] = None,
                       halve: bool = False) -> AuditReport:
    """Sweep every +-1 weighting of K_n.

    Any weighting with min(e(-1), e(1)) >= h(n) that is zero-sum-K4-free is a
    violation.  The same sweep checks that the min-count filter and the
    |sum| <= C(n,2) - g(n) filter select identical weightings, that every
    zero-sum-K4-free weighting has a triangle-free colour class, and counts the
    sharpness witnesses with e(1) = h(n) - 1.
    """
    _check_scale(n, allow_large)
    return _threshold_sweep(n, threshold_values(n).h, workers, halve)


# -- extremal ----------------------------------------------------------------


def _unrank_colex(rank: int, k: int) -> int:
    """The ``rank``-th k-bit mask in increasing numeric order."""
    mask = 0
    for i in range(k, 0, -1):
        c = i - 1
        while comb(c + 1, i) <= rank:
            c += 1
        mask |= 1 << c
        rank -= comb(c, i)
    return mask


def _positive_graph(n: int, mask: int) -> SimpleGraph:
    return SimpleGraph.from_edges(
        n, (edge_pair(i, n) for i in range(edge_count(n)) if mask >> i & 1)
    )


def audit_extremal_k4(n: int, *, workers: Optional[int] = None) -> AuditReport:
    """Over all weightings with e(1) = h(n) - 1: zero-sum-K4-free iff the
    (+1)-graph has the profile floor(n/4)*C4 + J with |J| = n mod 4.

    The profile is only computed for supports whose degree histogram equals
    the extremal one; any other support cannot have that profile.
    """
    _check_scale(n, allow_large=True)
    h = threshold_values(n).h
    k = h - 1
    n_edges = edge_count(n)
    total = comb(n_edges, k)
    quads, stars = K.subset_masks(n, 4), K.star_masks(n)
    target = extremal_profile(n)
    ext = extremal_k4_free_weighting(n, j_for(n))
    target_hist = np.zeros(n, dtype=np.int64)
    for v in range(n):
        target_hist[ext.graph_of(1).degree(v)] += 1

    def run(rng):
        lo, hi = rng
        start, count = _unrank_colex(lo, k), hi - lo
        size = 4096
        while True:
            free_buf = np.zeros(size, dtype=np.int64)
            match_buf = np.zeros(size, dtype=np.int64)
            nfree, nmatch = K.extremal_chunk(start, count, n, quads, stars, target_hist,
                                             free_buf, match_buf)
            if max(nfree, nmatch) <= size:
                return free_buf[:nfree].tolist(), match_buf[:nmatch].tolist()
            size = max(nfree, nmatch)

    parts = _map_chunks(run, _ranges(0, total), workers)
    free = [m for f, _ in parts for m in f]
    survivors = [m for _, s in parts for m in s]

    matching, tallies = set(), Counter()
    for mask in survivors:
        prof = classify_components(_positive_graph(n, mask))
        tallies["degree_match_profile:" + prof.key()] += 1
        if prof == target:
            matching.add(mask)
    for mask in free:
        w = SignedWeighting.from_mask(n, mask)
        if not is_zero_sum_k4_free(w):
            raise InternalInconsistency(f"kernel and detector disagree on {w.to_json()}")
        tallies["free_profile:" + classify_components(w.graph_of(1)).key()] += 1

    report = AuditReport(Statement.EXTREMAL_K4, "n", n, total_scanned=total)
    for mask in sorted(set(free) ^ matching):
        report.add_violation(SignedWeighting.from_mask(n, mask).to_dict())
    report.statistics = {
        "h": h,
        "positive_edges": k,
        "expected_profile": target.key(),
        "zero_sum_k4_free": len(free),
        "profile_matches": len(matching),
        "degree_prefilter_survivors": len(survivors),
        "mismatches": report.violation_count,
        **dict(tallies),
    }
    return report


# -- balanced constructions --------------------------------------------------


def _paired_clique_size(n: int) -> Optional[int]:
    for sol in iter_bal_clique():
        m = (1 + sol.y) // 2
        if m == n:
            return sol.x
        if m > n:
            return None


def audit_balanced_construction(kind: Construction | str, n: int, m_max: int, *,
                                budget: int = DEFAULT_BUDGET, strict: bool = False) -> AuditReport:
    """Check balance, then decide zero-sum K_m for m = 2..m_max by the closed
    form and, within ``budget`` subsets, by a direct scan; the two must agree.

    Clique orders outside S1 (clique-negative) or non-squares (bipartition)
    must come out zero-sum free.  With ``strict``, an over-budget order raises
    BudgetExceeded carrying the partial report instead of running formula-only.
    """
    kind = Construction(kind)
    if kind is Construction.CLIQUE_NEG:
        a = _paired_clique_size(n)
        if a is None:
            raise NotBalanced(f"n={n} is not in S1")
        w = clique_negative_weighting(n, a)
        in_family = set(s1_members(max(m_max, 1)))
    elif kind is Construction.BIPARTITION:
        r = isqrt(n)
        if n < 1 or r * r != n:
            raise NotBalanced(f"n={n} is not a perfect square")
        a = r * (r + 1) // 2
        w = bipartition_weighting(n, a)
        in_family = {i * i for i in range(1, isqrt(m_max) + 1)}
    else:
        raise ArgumentOutOfRange("balanced audit covers CLIQUE_NEG and BIPARTITION only")
    if not 2 <= m_max <= n:
        raise ArgumentOutOfRange(f"m_max={m_max} outside [2, {n}]")
    neg, pos = w.count(-1), w.count(1)
    if neg != pos:
        raise InternalInconsistency(f"construction on n={n} is not balanced ({neg} vs {pos})")

    report = AuditReport(Statement.BALANCED_NO_ZS_KM, "n", n)
    free_m, zs_m, formula_only, disagree = [], [], [], []
    report.statistics = {
        "kind": kind.value, "a": a, "m_max": m_max, "budget": budget,
        "negative_edges": neg, "positive_edges": pos,
        "zero_sum_free_m": free_m, "zero_sum_m": zs_m,
        "formula_only_m": formula_only, "disagreements_m": disagree,
    }
    for m in range(2, m_max + 1):
        ts = zero_sum_ts(kind, n, a, m)
        by_formula = bool(ts)
        space = comb(n, m)
        if space <= budget:
            cert = find_zero_sum_clique(w, m)
            report.total_scanned += space
            by_scan = cert.kind is CertificateKind.ZERO_SUM_WITNESS
            agrees = by_scan == by_formula
            if by_scan:
                t_hit = sum(1 for v in cert.witness if v < a)
                agrees = agrees and t_hit in ts and cert.recheck(w)
            if not agrees:
                disagree.append(m)
                report.add_violation(w.to_dict())
        elif strict:
            raise BudgetExceeded(f"C({n},{m})={space} exceeds budget {budget}", report)
        else:
            formula_only.append(m)
        (zs_m if by_formula else free_m).append(m)
        if by_formula and m not in in_family:
            report.add_violation(w.to_dict())
    return report


# -- S1 / S2 -----------------------------------------------------------------


def audit_s1s2(limit: int) -> AuditReport:
    if limit < 1:
        raise ArgumentOutOfRange("limit must be >= 1")
    found = s1_s2_intersection(limit)
    s1 = s1_members(limit)
    report = AuditReport(Statement.S1S2_SCAN, "limit", limit,
                         total_scanned=len(s1) + isqrt(limit))
    expected = [v for v in (1, 4) if v <= limit]
    for v in found:
        if v not in expected:
            report.add_violation({"unexpected_member": v})
    for v in expected:
        if v not in found:
            report.add_violation({"missing_member": v})
    report.statistics = {"intersection": found, "s1_terms": s1, "s2_terms": isqrt(limit)}
    return report


# -- triangle-free class ------------------------------------------------------


def triangle_free_lemma_scan(n: int, *, workers: Optional[int] = None) -> dict:
    """Sweep every labelled graph on n vertices, keep those that are triangle-free
    with no induced K_{1,3} or P_3, and check their component structure and
    edge bound against h(n) - 1."""
    if not 1 <= n <= LARGE_N:
        raise ScaleRefused(f"graph sweep needs 1 <= n <= {LARGE_N}")
    n_edges = edge_count(n)
    quads, triples = K.subset_masks(n, 4), K.subset_masks(n, 3)

    def run(rng):
        lo, hi = rng
        size = 4096
        while True:
            out = np.zeros(size, dtype=np.int64)
            found = K.triangle_free_class_chunk(lo, hi, quads, triples, out)
            if found <= size:
                return out[:found].tolist()
            size = found

    members = [g for part in _map_chunks(run, _ranges(0, 1 << n_edges), workers) for g in part]
    h = threshold_values(n).h
    target = extremal_profile(n)
    stats = Counter(graphs_scanned=1 << n_edges, class_members=len(members))
    max_edges = 0
    for mask in members:
        g = _positive_graph(n, mask)
        prof = classify_components(g)
        e = g.num_edges()
        max_edges = max(max_edges, e)
        if prof.count("OTHER"):
            stats["other_component_failures"] += 1
        if e > h - 1:
            stats["edge_bound_failures"] += 1
        if e == h - 1:
            stats["at_bound"] += 1
            if prof != target:
                stats["at_bound_wrong_profile"] += 1
        if prof == target:
            stats["extremal_profile_members"] += 1
            if e != h - 1:
                stats["extremal_profile_wrong_edges"] += 1
    stats["max_edges"] = max_edges
    stats["h_minus_1"] = h - 1
    return dict(stats)


# -- oracle agreement ---------------------------------------------------------


def structural_agreement(n: int, masks: Optional[np.ndarray] = None, *,
                         workers: Optional[int] = None) -> dict:
    """Compare the direct 4-subset scan with the induced-pattern search on the
    (-1)-graph, over every weighting of K_n or over the given packed masks."""
    if not 4 <= n <= K.MAX_PACKED_N:
        raise ScaleRefused(f"packed agreement check needs 4 <= n <= {K.MAX_PACKED_N}")
    quads, ptab = K.subset_masks(n, 4), K.pair_table(n)
    if masks is None:
        parts = _map_chunks(lambda r: K.agreement_range(r[0], r[1], n, quads, ptab),
                            _ranges(0, 1 << edge_count(n)), workers)
        scanned = 1 << edge_count(n)
    else:
        masks = np.ascontiguousarray(masks, dtype=np.int64)
        parts = [K.agreement_masks(masks, n, quads, ptab)]
        scanned = len(masks)
    return {
        "scanned": scanned,
        "zero_sum_k4_free": sum(int(p[0]) for p in parts),
        "disagreements": sum(int(p[1]) for p in parts),
    }
