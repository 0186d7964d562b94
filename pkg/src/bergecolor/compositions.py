"""Weak compositions of r into r slots, their refinement order, and edge typing.

A composition ``rho`` refines down to ``tau`` (``precedes(rho, tau)``) when
rho has strictly larger support and its non-zero entries can be grouped so the
group sums are exactly the non-zero entries of tau. Zero entries never join a
group: they contribute nothing to any sum. That order drives the recursive
coloring of the complete host layer by layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PartitionMismatchError
from .model import Edge


@dataclass(frozen=True, order=True)
class WeakComposition:
    """Tuple of non-negative integers; here always summing to its own length."""

    entries: tuple[int, ...]

    def __post_init__(self):
        if any(e < 0 for e in self.entries):
            raise ValueError("entries must be non-negative")

    @property
    def r(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> int:
        return sum(self.entries)

    @property
    def max_entry(self) -> int:
        return max(self.entries)

    @property
    def support(self) -> int:
        return sum(1 for e in self.entries if e > 0)

    def __iter__(self):
        return iter(self.entries)

    def __str__(self):
        return "(" + ",".join(map(str, self.entries)) + ")"


def weak_compositions(r: int) -> list[WeakComposition]:
    """All vectors of r non-negative integers summing to r, in lex order."""
    if r < 1:
        raise ValueError("r must be positive")
    out: list[WeakComposition] = []

    def rec(prefix: list[int], remaining: int, slots: int):
        if slots == 1:
            out.append(WeakComposition(tuple(prefix + [remaining])))
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v, slots - 1)

    rec([], r, r)
    return out


def precedes(rho: WeakComposition, tau: WeakComposition) -> bool:
    """Exact refinement test by backtracking over groupings of rho's support."""
    if rho.r != tau.r:
        raise ValueError("compositions must have the same length")
    if rho.support <= tau.support:
        return False
    items = sorted((e for e in rho.entries if e > 0), reverse=True)
    capacities = sorted((e for e in tau.entries if e > 0), reverse=True)

    def place(i: int) -> bool:
        if i == len(items):
            return all(c == 0 for c in capacities)
        tried: set[int] = set()
        for b in range(len(capacities)):
            cap = capacities[b]
            if items[i] <= cap and cap not in tried:
                tried.add(cap)
                capacities[b] -= items[i]
                if place(i + 1):
                    capacities[b] += items[i]
                    return True
                capacities[b] += items[i]
        return False

    return place(0)


def linear_extension(r: int) -> list[WeakComposition]:
    """Total order compatible with the refinement order.

    Refinement strictly decreases support going up, so sorting by descending
    support is already a linear extension; lexicographic entries break ties so
    builds are reproducible. The all-ones vector is always first.
    """
    return sorted(weak_compositions(r), key=lambda c: (-c.support, c.entries))


def type_vector(edge: Edge, parts: Sequence[tuple[int, int]]) -> WeakComposition:
    """Per-part intersection counts of an edge; entry i is |edge ∩ parts[i]|."""
    counts = [0] * len(parts)
    for v in edge:
        for i, (a, b) in enumerate(parts):
            if a <= v < b:
                counts[i] += 1
                break
        else:
            raise PartitionMismatchError(f"vertex {v} outside all parts")
    return WeakComposition(tuple(counts))


def is_minimum(candidate: WeakComposition, universe: Iterable[WeakComposition]) -> bool:
    """True when candidate precedes every other composition in the universe."""
    return all(c == candidate or precedes(candidate, c) for c in universe)
