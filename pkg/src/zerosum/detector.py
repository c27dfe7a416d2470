"""Zero-sum clique detection and the small-graph structure tests behind it."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from . import _kernels
from .errors import ArgumentOutOfRange, BadOrder, InternalInconsistency
from .weightings import SignedWeighting, SimpleGraph


class CertificateKind(str, enum.Enum):
    ZERO_SUM_WITNESS = "ZERO_SUM_WITNESS"
    NONE_EXISTS = "NONE_EXISTS"


@dataclass(frozen=True)
class Certificate:
    kind: CertificateKind
    m: int
    witness: Optional[tuple[int, ...]] = None
    context: str = ""

    def __post_init__(self):
        if (self.kind is CertificateKind.ZERO_SUM_WITNESS) != (self.witness is not None):
            raise ValueError("a witness is present exactly for ZERO_SUM_WITNESS")
        if self.witness is not None and len(self.witness) != self.m:
            raise ValueError("witness size must equal m")

    def recheck(self, w: SignedWeighting) -> bool:
        """Re-verify a witness against ``w`` (NONE_EXISTS cannot be re-checked cheaply)."""
        if self.witness is None:
            return True
        return w.subclique_weight(self.witness) == 0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "m": self.m,
            "witness": list(self.witness) if self.witness is not None else None,
            "context": self.context,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> Certificate:
        wit = data.get("witness")
        return cls(
            CertificateKind(data["kind"]),
            data["m"],
            tuple(wit) if wit is not None else None,
            data.get("context", ""),
        )


def find_zero_sum_clique(w: SignedWeighting, m: int) -> Certificate:
    """Lexicographically first m-subset whose clique weight is 0."""
    if not 2 <= m <= w.n:
        raise BadOrder(f"clique order {m} outside [2, {w.n}]")
    n = w.n
    total = comb(n, m)
    if w.r == 1 and comb(m, 2) % 2:
        return Certificate(
            CertificateKind.NONE_EXISTS, m, None,
            f"parity: C({m},2) is odd so no +-1 clique of order {m} sums to 0",
        )
    wt = [[0] * n for _ in range(n)]
    for u, v in combinations(range(n), 2):
        wt[u][v] = wt[v][u] = w.weight(u, v)

    chosen: list[int] = []

    # depth-first over increasing vertex lists keeps lexicographic order
    def extend(start: int, acc: int) -> Optional[tuple[int, ...]]:
        if len(chosen) == m:
            return tuple(chosen) if acc == 0 else None
        for v in range(start, n - (m - len(chosen)) + 1):
            row = wt[v]
            gain = sum(row[u] for u in chosen)
            chosen.append(v)
            hit = extend(v + 1, acc + gain)
            chosen.pop()
            if hit is not None:
                return hit
        return None

    hit = extend(0, 0)
    if hit is not None:
        return Certificate(CertificateKind.ZERO_SUM_WITNESS, m, hit,
                           f"first zero-sum {m}-subset in lexicographic order")
    return Certificate(CertificateKind.NONE_EXISTS, m, None,
                       f"exhaustive scan of all C({n},{m})={total} subsets")


class Pattern(str, enum.Enum):
    K13 = "K13"
    K3uK1 = "K3uK1"
    P3 = "P3"


@dataclass(frozen=True)
class ForbiddenHit:
    pattern: Pattern
    vertices: tuple[int, int, int, int]


def classify_three_edge_quad(g: SimpleGraph, quad) -> Pattern:
    degs = [sum(1 for u in quad if u != v and g.has_edge(u, v)) for v in quad]
    if 3 in degs:
        return Pattern.K13
    if 0 in degs:
        return Pattern.K3uK1
    return Pattern.P3


def induced_forbidden_scan(g: SimpleGraph) -> Optional[ForbiddenHit]:
    """First 4-set (lexicographic) inducing K_{1,3}, K_3+K_1 or P_3, i.e. exactly 3 edges."""
    for quad in combinations(range(g.n), 4):
        if g.induced_edge_count(quad) == 3:
            return ForbiddenHit(classify_three_edge_quad(g, quad), quad)
    return None


def k4_free_by_scan(w: SignedWeighting) -> bool:
    """Direct path: no 4-subset has exactly three negative edges."""
    if w.r != 1:
        raise ValueError("defined for r=1 weightings")
    for quad in combinations(range(w.n), 4):
        if sum(1 for u, v in combinations(quad, 2) if w.weight(u, v) == -1) == 3:
            return False
    return True


def k4_free_by_structure(w: SignedWeighting) -> bool:
    """Structural path: the (-1)-graph has no induced K_{1,3}, K_3+K_1 or P_3."""
    if w.r != 1:
        raise ValueError("defined for r=1 weightings")
    if w.n < 4:
        return True
    return induced_forbidden_scan(w.graph_of(-1)) is None


def is_zero_sum_k4_free(w: SignedWeighting) -> bool:
    """Both paths are evaluated; a disagreement is an internal error."""
    if w.n < 4:
        return True
    direct = k4_free_by_scan(w)
    structural = k4_free_by_structure(w)
    if direct != structural:
        raise InternalInconsistency(f"direct={direct} structural={structural} for {w.to_json()}")
    return direct


def is_triangle_free(g: SimpleGraph) -> bool:
    for a, b, c in combinations(range(g.n), 3):
        if g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c):
            return False
    return True


PROFILE_TYPES = ("K1", "K2", "P2", "C4", "OTHER")
_TYPE_SIZE = {"K1": 1, "K2": 2, "P2": 3, "C4": 4}


@dataclass(frozen=True)
class ComponentProfile:
    counts: dict = field(default_factory=dict)
    other_vertices: int = 0

    def count(self, kind: str) -> int:
        return self.counts.get(kind, 0)

    def vertex_total(self) -> int:
        return sum(_TYPE_SIZE[k] * self.count(k) for k in _TYPE_SIZE) + self.other_vertices

    def key(self) -> str:
        """Stable text form such as ``C4:2+K1:1``."""
        parts = [f"{k}:{self.count(k)}" for k in ("C4", "P2", "K2", "K1", "OTHER") if self.count(k)]
        return "+".join(parts) or "empty"

    def to_dict(self) -> dict:
        return {k: self.count(k) for k in PROFILE_TYPES}


def extremal_profile(n: int) -> ComponentProfile:
    """floor(n/4) copies of C4 plus the remainder J with |J| = n mod 4."""
    counts = {"C4": n // 4} if n >= 4 else {}
    j = {0: None, 1: "K1", 2: "K2", 3: "P2"}[n % 4]
    if j:
        counts[j] = 1
    return ComponentProfile(counts)


def _components(g: SimpleGraph) -> list[int]:
    seen = 0
    comps = []
    for s in range(g.n):
        if seen >> s & 1:
            continue
        comp = frontier = 1 << s
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = g.adj[v] & ~comp
            comp |= new
            frontier |= new
        seen |= comp
        comps.append(comp)
    return comps


def classify_components(g: SimpleGraph) -> ComponentProfile:
    counts = {k: 0 for k in PROFILE_TYPES}
    other_vertices = 0
    for comp in _components(g):
        verts = [v for v in range(g.n) if comp >> v & 1]
        degs = [(g.adj[v] & comp).bit_count() for v in verts]
        size, edges = len(verts), sum(degs) // 2
        if (size, edges) == (1, 0):
            kind = "K1"
        elif (size, edges) == (2, 1):
            kind = "K2"
        elif (size, edges) == (3, 2) and max(degs) == 2:
            kind = "P2"
        elif (size, edges) == (4, 4) and all(d == 2 for d in degs):
            kind = "C4"
        else:
            kind = "OTHER"
            other_vertices += size
        counts[kind] += 1
    return ComponentProfile({k: c for k, c in counts.items() if c}, other_vertices)


class Construction(str, enum.Enum):
    CLIQUE_NEG = "CLIQUE_NEG"
    BIPARTITION = "BIPARTITION"
    WIDE_RANGE = "WIDE_RANGE"


def clique_weight_formula(construction: Construction | str, n: int, a: int, m: int, t: int) -> int:
    """Weight of any K_m copy that meets the prefix part A=[0,a) in exactly t vertices."""
    construction = Construction(construction)
    if not (0 <= t <= min(a, m) and 0 <= m - t <= n - a):
        raise ArgumentOutOfRange(f"t={t} infeasible for n={n}, a={a}, m={m}")
    c = lambda k: k * (k - 1) // 2
    if construction is Construction.CLIQUE_NEG:
        return c(m) - 2 * c(t)
    if construction is Construction.BIPARTITION:
        return 2 * t * (m - t) - c(m)
    return -2 * c(t) + c(m - t)


def feasible_t(n: int, a: int, m: int) -> range:
    return range(max(0, m - (n - a)), min(a, m) + 1)


def zero_sum_ts(construction: Construction | str, n: int, a: int, m: int) -> list[int]:
    """Intersection sizes t for which the closed form predicts a zero-sum K_m."""
    return [t for t in feasible_t(n, a, m) if clique_weight_formula(construction, n, a, m, t) == 0]


def packed_k4_free(w: SignedWeighting) -> tuple[bool, bool]:
    """(direct, structural) answers from the compiled kernels for one r=1 weighting."""
    n = w.n
    if n > _kernels.MAX_PACKED_N:
        raise ValueError(f"packed view supports n <= {_kernels.MAX_PACKED_N}")
    mask = w.to_mask()
    quads = _kernels.subset_masks(n, 4)
    adj = np.zeros(n, dtype=np.int64)
    return (
        bool(_kernels.k4_free_direct(mask, quads)),
        bool(_kernels.k4_free_structural(mask, n, _kernels.pair_table(n), adj)),
    )
