"""Edge weightings of K_n, the graphs they induce, and the explicit constructions.

Edges of K_n are indexed lexicographically: (u, v) with u < v sits at
``u*n - u*(u+1)//2 + (v-u-1)``.  Partitions always occupy a vertex prefix,
so ``A = [0, a)``.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from itertools import combinations

from typing import Iterable, Sequence

from .errors import IncompatibleRemainder, InvalidPartition


def edge_count(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(u: int, v: int, n: int) -> int:
    if u > v:
        u, v = v, u
    if not 0 <= u < v < n:
        raise ValueError(f"({u}, {v}) is not an edge of K_{n}")
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def edge_pair(idx: int, n: int) -> tuple[int, int]:
    """Inverse of edge_index."""
    if not 0 <= idx < edge_count(n):
        raise ValueError(f"edge index {idx} out of range for K_{n}")
    u = 0
    row = n - 1
    while idx >= row:
        idx -= row
        u += 1
        row -= 1
    return u, u + 1 + idx


def edge_pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected loopless graph on ``range(n)``; ``adj[v]`` is a neighbour bitmask."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValueError("adjacency length must equal n")
        for v, row in enumerate(self.adj):
            if row >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            for u in range(self.n):
                if (row >> u & 1) != (self.adj[u] >> v & 1):
                    raise ValueError(f"asymmetric adjacency at ({u}, {v})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> SimpleGraph:
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        row = self.adj[v]
        return [u for u in range(self.n) if row >> u & 1]

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in combinations(range(self.n), 2) if self.adj[u] >> v & 1]

    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def induced_edge_count(self, vertices: Sequence[int]) -> int:
        return sum(1 for u, v in combinations(vertices, 2) if self.adj[u] >> v & 1)


@dataclass(frozen=True)
class SignedWeighting:
    """Integer weights on the edges of K_n, each in [-r, r]; for r=1 only +-1."""

    n: int
    r: int
    weights: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.r not in (1, 2):
            raise ValueError(f"unsupported range r={self.r}")
        if len(self.weights) != edge_count(self.n):
            raise ValueError(
                f"expected {edge_count(self.n)} weights for K_{self.n}, got {len(self.weights)}"
            )
        allowed = {-1, 1} if self.r == 1 else set(range(-self.r, self.r + 1))
        bad = [w for w in self.weights if w not in allowed]
        if bad:
            raise ValueError(f"weight {bad[0]} outside the declared range r={self.r}")

    def weight(self, u: int, v: int) -> int:
        return self.weights[edge_index(u, v, self.n)]

    def count(self, value: int) -> int:
        """e(value): number of edges carrying ``value``."""
        return sum(1 for w in self.weights if w == value)

    def graph_of(self, value: int) -> SimpleGraph:
        """The spanning graph whose edges are exactly the ``value``-weighted edges."""
        return SimpleGraph.from_edges(
            self.n, (p for p, w in zip(edge_pairs(self.n), self.weights) if w == value)
        )

    def subclique_weight(self, vertices: Sequence[int]) -> int:
        return sum(self.weight(u, v) for u, v in combinations(vertices, 2))

    def negated(self) -> SignedWeighting:
        return SignedWeighting(self.n, self.r, tuple(-w for w in self.weights))

    # packed view: bit i set <=> edge i carries +1 (r=1 only)
    def to_mask(self) -> int:
        if self.r != 1:
            raise ValueError("bit-vector view exists only for r=1")
        return sum(1 << i for i, w in enumerate(self.weights) if w == 1)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> SignedWeighting:
        return cls(n, 1, tuple(1 if mask >> i & 1 else -1 for i in range(edge_count(n))))

    def to_dict(self) -> dict:
        return {"n": self.n, "r": self.r, "weights": list(self.weights)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> SignedWeighting:
        try:
            n, r, weights = data["n"], data["r"], data["weights"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed weighting object: {exc}") from None
        if not (isinstance(n, int) and isinstance(r, int) and isinstance(weights, list)):
            raise ValueError("malformed weighting object: wrong field types")
        if not all(isinstance(w, int) and not isinstance(w, bool) for w in weights):
            raise ValueError("weights must be integers")
        return cls(n, r, tuple(weights))

    @classmethod
    def from_json(cls, text: str) -> SignedWeighting:
        return cls.from_dict(json.loads(text))


def weight_sum(w: SignedWeighting) -> int:
    return sum(w.weights)


def imbalance_identity_check(w: SignedWeighting) -> bool:
    """Self-test: |sum f| == C(n,2) - 2*min(e(-1), e(1)), counts taken independently."""
    if w.r != 1:
        raise ValueError("identity applies to r=1 weightings only")
    neg, pos = w.count(-1), w.count(1)
    return abs(weight_sum(w)) == edge_count(w.n) - 2 * min(neg, pos)


@dataclass(frozen=True)
class ThresholdValues:
    n: int
    h: int
    g: int


def threshold_values(n: int) -> ThresholdValues:
    if n < 1:
        raise ValueError("n must be >= 1")
    h = n + 1 if n % 4 == 0 else n
    return ThresholdValues(n, h, 2 * h)


def _check_partition(n: int, a: int) -> None:
    if n < 1 or not 1 <= a <= n:
        raise InvalidPartition(f"part size {a} invalid for K_{n}")


def clique_negative_weighting(n: int, a: int) -> SignedWeighting:
    """-1 inside A = [0, a), +1 everywhere else."""
    _check_partition(n, a)
    return SignedWeighting(n, 1, tuple(-1 if v < a else 1 for u, v in edge_pairs(n)))


def bipartition_weighting(n: int, a: int) -> SignedWeighting:
    """+1 across the cut (A, B), -1 inside either side."""
    _check_partition(n, a)
    return SignedWeighting(
        n, 1, tuple(1 if (u < a) != (v < a) else -1 for u, v in edge_pairs(n))
    )


def wide_range_weighting(n: int, x_size: int) -> SignedWeighting:
    """r=2 weighting: -2 inside X = [0, x_size), +1 inside Y, 0 across."""
    _check_partition(n, x_size)

    def f(u, v):
        if v < x_size:
            return -2
        if u >= x_size:
            return 1
        return 0

    return SignedWeighting(n, 2, tuple(f(u, v) for u, v in edge_pairs(n)))


class JChoice(str, enum.Enum):
    EMPTY = "EMPTY"
    K1 = "K1"
    K2 = "K2"
    P2 = "P2"


_J_SIZE = {JChoice.EMPTY: 0, JChoice.K1: 1, JChoice.K2: 2, JChoice.P2: 3}
_J_EDGES = {
    JChoice.EMPTY: [],
    JChoice.K1: [],
    JChoice.K2: [(0, 1)],
    JChoice.P2: [(0, 1), (1, 2)],
}


def j_for(n: int) -> JChoice:
    """The remainder component whose size equals n mod 4."""
    return {0: JChoice.EMPTY, 1: JChoice.K1, 2: JChoice.K2, 3: JChoice.P2}[n % 4]


def extremal_positive_edges(n: int, j_choice: JChoice) -> list[tuple[int, int]]:
    q = n // 4
    edges = []
    for i in range(q):
        b = 4 * i
        edges += [(b, b + 1), (b + 1, b + 2), (b + 2, b + 3), (b, b + 3)]
    base = 4 * q
    edges += [(base + u, base + v) for u, v in _J_EDGES[j_choice]]
    return edges


def extremal_k4_free_weighting(n: int, j_choice: JChoice | str) -> SignedWeighting:
    """+1 graph = floor(n/4) disjoint 4-cycles plus J on the leftover vertices."""
    j_choice = JChoice(j_choice)
    if n < 5:
        raise ValueError("extremal family is defined for n >= 5")
    if _J_SIZE[j_choice] != n % 4:
        raise IncompatibleRemainder(
            f"J={j_choice.value} has {_J_SIZE[j_choice]} vertices but n mod 4 = {n % 4}"
        )
    pos = {tuple(sorted(e)) for e in extremal_positive_edges(n, j_choice)}
    return SignedWeighting(n, 1, tuple(1 if p in pos else -1 for p in edge_pairs(n)))


def weighting_from_edges(n: int, positive_edges: Iterable[tuple[int, int]]) -> SignedWeighting:
    pos = {tuple(sorted(e)) for e in positive_edges}
    return SignedWeighting(n, 1, tuple(1 if p in pos else -1 for p in edge_pairs(n)))


