"""
Integer partitions: enumeration in a fixed canonical order, the refinement
order that governs stratum closures, and the vanishing-threshold function r.
Pure functions over immutable values.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Mapping, Tuple

from sympy.utilities.iterables import partitions as _sympy_partitions

from app.core.errors import StrataArgumentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Partition:
    """
    A partition of d: parts sorted non-increasing, each >= 1.

    Rendered as "2+1+1". Use Partition.of(...) to build from parts in any
    order; the constructor itself insists on the canonical form.
    """

    parts: Tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise StrataArgumentError("a partition needs at least one part")
        if any((not isinstance(p, int)) or p < 1 for p in self.parts):
            raise StrataArgumentError(f"parts must be positive integers, got {self.parts}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise StrataArgumentError(f"parts must be non-increasing, got {self.parts}")

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(sorted(parts, reverse=True)))

    @classmethod
    def from_multiplicities(cls, multiplicities: Mapping[int, int]) -> "Partition":
        parts: List[int] = []
        for j, m in multiplicities.items():
            parts.extend([j] * m)
        return cls.of(*parts)

    @property
    def d(self) -> int:
        return sum(self.parts)

    @property
    def size(self) -> int:
        """|λ|, the number of parts."""
        return len(self.parts)

    @property
    def multiplicities(self) -> Dict[int, int]:
        """j -> m_j(λ), only for j that occur."""
        counts: Dict[int, int] = {}
        for p in self.parts:
            counts[p] = counts.get(p, 0) + 1
        return counts

    def m(self, j: int) -> int:
        return self.parts.count(j)

    @property
    def is_singleton(self) -> bool:
        return len(self.parts) == 1

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """Canonical order: graded by |λ|, then lexicographic on ascending parts."""
        return (self.size, tuple(reversed(self.parts)))

    def __str__(self) -> str:
        return "+".join(str(p) for p in self.parts)


def parse_partition(text: str) -> Partition:
    """Parse "2+1+1", "1+1+2" or "2,1,1"."""
    if not isinstance(text, str) or not text.strip():
        raise StrataArgumentError("empty partition string")
    pieces = text.replace(",", "+").split("+")
    try:
        parts = [int(p.strip()) for p in pieces]
    except ValueError:
        raise StrataArgumentError(f"cannot parse partition {text!r}") from None
    return Partition.of(*parts)


def enumerate_partitions(d: int, min_parts: int = 0) -> List[Partition]:
    """
    All partitions of d with at least min_parts parts, in canonical order.

    Raises:
        StrataArgumentError: if d < 1.
    """
    if not isinstance(d, int) or d < 1:
        raise StrataArgumentError(f"d must be a positive integer, got {d!r}")
    found = [
        Partition.from_multiplicities(dict(mult))
        for mult in _sympy_partitions(d)
    ]
    selected = [lam for lam in found if lam.size >= min_parts]
    selected.sort(key=lambda lam: lam.sort_key)
    return selected


def non_singleton_partitions(d: int) -> List[Partition]:
    return enumerate_partitions(d, 2)


def partitions_with_size(d: int, size: int) -> List[Partition]:
    return [lam for lam in enumerate_partitions(d) if lam.size == size]


# ---------------------------------------------------------------------------
# Refinement order
# ---------------------------------------------------------------------------

def _sub_multisets_with_sum(pool: Tuple[int, ...], target: int) -> Iterator[Tuple[int, ...]]:
    """Distinct sub-multisets of pool (sorted non-increasing) summing to target."""
    if target == 0:
        yield ()
        return
    started = set()
    for i, value in enumerate(pool):
        if value > target or value in started:
            continue
        started.add(value)
        for rest in _sub_multisets_with_sum(pool[i + 1:], target - value):
            yield (value,) + rest


def _remove(pool: Tuple[int, ...], taken: Tuple[int, ...]) -> Tuple[int, ...]:
    remaining = list(pool)
    for value in taken:
        remaining.remove(value)
    return tuple(remaining)


@lru_cache(maxsize=None)
def _can_split(pieces: Tuple[int, ...], blocks: Tuple[int, ...]) -> bool:
    # pieces and blocks are sorted non-increasing with equal sums.
    if not blocks:
        return not pieces
    head, tail = blocks[0], blocks[1:]
    for chosen in _sub_multisets_with_sum(pieces, head):
        if _can_split(_remove(pieces, chosen), tail):
            return True
    return False


def refines(lam: Partition, mu: Partition) -> bool:
    """
    True iff λ is finer than or equal to μ: μ's parts can each be split so
    that the pieces, taken together, are exactly λ's parts.

    Raises:
        StrataArgumentError: if λ and μ partition different integers.
    """
    if lam.d != mu.d:
        raise StrataArgumentError(f"cannot compare partitions of {lam.d} and {mu.d}")
    if lam.size < mu.size:
        return False
    return _can_split(lam.parts, mu.parts)


def refinement_covers(d: int) -> List[Tuple[Partition, Partition]]:
    """Covering pairs (λ, μ): λ strictly refines μ with nothing strictly between."""
    all_parts = enumerate_partitions(d)
    below = {
        mu: [lam for lam in all_parts if lam != mu and refines(lam, mu)]
        for mu in all_parts
    }
    covers: List[Tuple[Partition, Partition]] = []
    for mu, finer in below.items():
        for lam in finer:
            if not any(lam in below[nu] for nu in finer):
                covers.append((lam, mu))
    covers.sort(key=lambda pair: (pair[1].sort_key, pair[0].sort_key))
    return covers


# ---------------------------------------------------------------------------
# The vanishing threshold r
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _r_table(d: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    r(1..d) and, for each e <= d, the number of non-singleton partitions of e
    attaining the minimum in the recursion. Index 0 is unused.

    The minimum over non-singleton λ ⊢ e of Σ m_j r(j) is a minimum over
    partitions of e into parts <= e-1, so it is computed as a knapsack over
    parts with partition-style counting of the minimisers.
    """
    r = [0, 2]
    minimisers = [0, 0]
    for e in range(2, d + 1):
        # best[s], ways[s]: min cost / number of optimal partitions of s into parts < e
        best = [0] + [None] * e
        ways = [1] + [0] * e
        for part in range(1, e):
            cost = r[part]
            for s in range(part, e + 1):
                if best[s - part] is None:
                    continue
                candidate = best[s - part] + cost
                if best[s] is None or candidate < best[s]:
                    best[s] = candidate
                    ways[s] = ways[s - part]
                elif candidate == best[s]:
                    ways[s] += ways[s - part]
        r.append(1 + best[e])
        minimisers.append(ways[e])
    return tuple(r), tuple(minimisers)


def r_of_degree(d: int) -> int:
    """r(1) = 2, r(d) = 1 + min{ r(λ) : λ ⊢ d, |λ| >= 2 }."""
    if not isinstance(d, int) or d < 1:
        raise StrataArgumentError(f"d must be a positive integer, got {d!r}")
    r, _ = _r_table(d)
    return r[d]


def r_minimiser_count(d: int) -> int:
    """How many non-singleton partitions of d attain the minimum (0 for d = 1)."""
    if not isinstance(d, int) or d < 1:
        raise StrataArgumentError(f"d must be a positive integer, got {d!r}")
    _, counts = _r_table(d)
    return counts[d]


def r_of_partition(lam: Partition) -> int:
    """
    r(λ) = Σ_j m_j(λ) r(j) for a non-singleton λ.

    Raises:
        StrataArgumentError: for a singleton partition.
    """
    if lam.is_singleton:
        raise StrataArgumentError(f"r(λ) is defined only for |λ| >= 2, got {lam}")
    return sum(m * r_of_degree(j) for j, m in lam.multiplicities.items())


def r_closed_form(lam: Partition) -> int:
    """2d + |λ| - m_1(λ)."""
    return 2 * lam.d + lam.size - lam.m(1)


def r_minimizers(d: int) -> List[Partition]:
    """Non-singleton partitions of d attaining the recursion minimum (explicit, small d)."""
    candidates = non_singleton_partitions(d)
    if not candidates:
        return []
    values = {lam: r_of_partition(lam) for lam in candidates}
    low = min(values.values())
    return [lam for lam in candidates if values[lam] == low]
