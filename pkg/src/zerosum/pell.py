"""Solution streams for the two Pell-type families used by the constructions.

NEG_PELL is ``y^2 - 2x^2 = -1`` and BAL_CLIQUE is ``8x^2 - 8x + 1 = y^2``.
Everything is exact Python integer arithmetic; every emitted term is checked
against its defining equation before it leaves this module.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import isqrt
from typing import Iterator

from .errors import InternalInconsistency


class Family(str, enum.Enum):
    NEG_PELL = "NEG_PELL"
    BAL_CLIQUE = "BAL_CLIQUE"


@dataclass(frozen=True)
class PellSolution:
    k: int
    x: int
    y: int
    family: Family

    def satisfies(self) -> bool:
        if self.family is Family.NEG_PELL:
            return self.y * self.y - 2 * self.x * self.x == -1
        return 8 * self.x * self.x - 8 * self.x + 1 == self.y * self.y

    def to_dict(self) -> dict:
        return {"k": self.k, "x": self.x, "y": self.y, "family": self.family.value}


def _checked(sol: PellSolution) -> PellSolution:
    if not sol.satisfies():
        raise InternalInconsistency(f"{sol} violates its defining equation")
    if sol.family is Family.NEG_PELL and not (sol.x % 2 and sol.y % 2):
        raise InternalInconsistency(f"{sol} has an even coordinate")
    return sol


def iter_neg_pell() -> Iterator[PellSolution]:
    """Yield the solutions of y^2 - 2x^2 = -1 in increasing order, forever."""
    x, y, k = 1, 1, 1
    while True:
        yield _checked(PellSolution(k, x, y, Family.NEG_PELL))
        x, y = 3 * x + 2 * y, 4 * x + 3 * y
        k += 1


def iter_bal_clique() -> Iterator[PellSolution]:
    """Yield the solutions of 8x^2 - 8x + 1 = y^2 via the three-term recursion.

    Raises InternalInconsistency if the x-update is not an exact division.
    """
    yield _checked(PellSolution(1, 1, 1, Family.BAL_CLIQUE))
    yield _checked(PellSolution(2, 3, 7, Family.BAL_CLIQUE))
    y_prev, y, x, k = 1, 7, 3, 2
    while True:
        y_prev, y = y, 6 * y - y_prev
        q, rem = divmod(y + x + 1, 3)
        if rem:
            raise InternalInconsistency(f"x update not integral at k={k + 1}")
        x, k = q, k + 1
        yield _checked(PellSolution(k, x, y, Family.BAL_CLIQUE))


def _take(it: Iterator[PellSolution], count: int) -> list[PellSolution]:
    if count < 1:
        raise ValueError("count must be >= 1")
    return [next(it) for _ in range(count)]


def neg_pell_stream(count: int) -> list[PellSolution]:
    return _take(iter_neg_pell(), count)


def bal_clique_stream(count: int) -> list[PellSolution]:
    return _take(iter_bal_clique(), count)


def iter_s1() -> Iterator[int]:
    """Orders n = (1 + y_k)/2 admitting a balanced clique-negative weighting."""
    for sol in iter_bal_clique():
        yield (1 + sol.y) // 2


def iter_s2() -> Iterator[int]:
    k = 1
    while True:
        yield k * k
        k += 1


def _upto(it: Iterator[int], limit: int) -> Iterator[int]:
    for v in it:
        if v > limit:
            return
        yield v


def s1_members(limit: int) -> list[int]:
    if limit < 1:
        raise ValueError("limit must be >= 1")
    return list(_upto(iter_s1(), limit))


def s2_members(limit: int) -> list[int]:
    if limit < 1:
        raise ValueError("limit must be >= 1")
    return list(_upto(iter_s2(), limit))


def s1_s2_intersection(limit: int) -> list[int]:
    """Merge the two ascending membership streams up to ``limit``."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    out = []
    a_it, b_it = _upto(iter_s1(), limit), _upto(iter_s2(), limit)
    a, b = next(a_it, None), next(b_it, None)
    while a is not None and b is not None:
        if a == b:
            out.append(a)
            a, b = next(a_it, None), next(b_it, None)
        elif a < b:
            a = next(a_it, None)
        else:
            b = next(b_it, None)
    return out


def is_perfect_square(v: int) -> bool:
    return v >= 0 and isqrt(v) ** 2 == v


def ljunggren_check(w: int) -> bool:
    """True iff 2w^4 - 1 is a perfect square, i.e. 1 + Q^2 = 2w^4 is solvable."""
    if w < 1:
        raise ValueError("w must be >= 1")
    return is_perfect_square(2 * w**4 - 1)
