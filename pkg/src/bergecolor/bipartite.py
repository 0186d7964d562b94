"""Bipartite ingredients: a four-cycle-free tiling of K_{n,n} over a prime
field, exact girth verification, and partition documents for imported tilings.

The native construction indexes both sides by pairs over F_q and puts the
pair ((a1,a2),(b1,b2)) into class c exactly when a2 + b2 = a1*b1 + c. Each
class is certified four-cycle-free before it is returned; the algebra is
never trusted on its own.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import (
    ConstructionInvalidError,
    InvalidPartitionError,
    NotPrimeError,
    PartitionFormatError,
)
from .model import DOCUMENT_VERSION, BipartiteGraph

PARTITION_KIND = "bipartite-partition"


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldElement:
    """Residue modulo a prime q; primality is checked at construction."""

    value: int
    q: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise NotPrimeError(f"{self.q} is not prime")
        object.__setattr__(self, "value", self.value % self.q)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.q != self.q:
                raise ValueError("mixed moduli")
            return other
        return FieldElement(int(other), self.q)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other).value, self.q)

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other).value, self.q)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other).value, self.q)

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class BipartitePartition:
    """Ordered list of bipartite graphs on shared sides, tiling all pairs."""

    n_a: int
    n_b: int
    classes: tuple[BipartiteGraph, ...]

    def __post_init__(self):
        for g in self.classes:
            if g.n_a != self.n_a or g.n_b != self.n_b:
                raise InvalidPartitionError("class side sizes disagree with partition")

    @property
    def num_classes(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    expected_pairs: int
    covered_pairs: int
    duplicated: tuple[tuple[int, int], ...]
    missing: tuple[tuple[int, int], ...]
    class_sizes: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "expected_pairs": self.expected_pairs,
            "covered_pairs": self.covered_pairs,
            "duplicated": [list(p) for p in self.duplicated],
            "missing": [list(p) for p in self.missing],
            "class_sizes": list(self.class_sizes),
        }


def verify_partition(p: BipartitePartition, max_listed: int = 20) -> PartitionReport:
    """Confirm pairwise edge-disjointness and exact coverage of all pairs."""
    seen: set[tuple[int, int]] = set()
    duplicated: list[tuple[int, int]] = []
    for g in p.classes:
        for e in g.edges:
            if e in seen:
                duplicated.append(e)
            else:
                seen.add(e)
    expected = p.n_a * p.n_b
    missing: list[tuple[int, int]] = []
    if len(seen) < expected:
        for a in range(p.n_a):
            for b in range(p.n_b):
                if (a, b) not in seen:
                    missing.append((a, b))
                    if len(missing) > max_listed:
                        break
            if len(missing) > max_listed:
                break
    duplicated.sort()
    ok = not duplicated and not missing
    return PartitionReport(
        ok=ok,
        expected_pairs=expected,
        covered_pairs=len(seen),
        duplicated=tuple(duplicated[:max_listed]),
        missing=tuple(missing[:max_listed]),
        class_sizes=tuple(g.edge_count for g in p.classes),
    )


# -- girth -------------------------------------------------------------------


def _unified_adjacency(g: BipartiteGraph) -> list[list[int]]:
    # A-side occupies ids 0..n_a-1, B-side ids n_a..n_a+n_b-1
    adj: list[list[int]] = [[] for _ in range(g.n_a + g.n_b)]
    for a, b in sorted(g.edges):
        adj[a].append(g.n_a + b)
        adj[g.n_a + b].append(a)
    for row in adj:
        row.sort()
    return adj


def _bfs_min_cycle(adj, root, depth_cap=None):
    """Smallest closed-walk detection value through root (None if acyclic here)."""
    from collections import deque

    dist = {root: 0}
    parent = {root: -1}
    best = None
    queue = deque([root])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if depth_cap is not None and du >= depth_cap:
            continue
        for w in adj[u]:
            if w == parent[u]:
                continue
            if w in dist:
                length = du + dist[w] + 1
                if best is None or length < best:
                    best = length
            else:
                dist[w] = du + 1
                parent[w] = u
                queue.append(w)
    return best


def _bfs_cycle_walks(adj, root):
    """All (length, walk) detections from one root's BFS tree."""
    from collections import deque

    dist = {root: 0}
    parent = {root: -1}
    hits = []
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w == parent[u]:
                continue
            if w in dist:
                hits.append((dist[u] + dist[w] + 1, u, w))
            else:
                dist[w] = dist[u] + 1
                parent[w] = u
                queue.append(w)
    walks = []
    for length, u, w in hits:
        pu = []
        x = u
        while x != -1:
            pu.append(x)
            x = parent[x]
        pw = []
        x = w
        while x != -1:
            pw.append(x)
            x = parent[x]
        pu.reverse()  # root .. u
        pw.reverse()  # root .. w
        cycle = pu + pw[1:][::-1]
        walks.append((length, cycle))
    return walks


def _canonical_cycle(cycle: list[int]) -> tuple[int, ...]:
    k = len(cycle)
    best = None
    for start in range(k):
        for direction in (1, -1):
            cand = tuple(cycle[(start + direction * i) % k] for i in range(k))
            if best is None or cand < best:
                best = cand
    return best


def verify_girth(
    g: BipartiteGraph, gmin: int
) -> tuple[bool, tuple[int, ...] | None]:
    """True iff g has no cycle shorter than gmin.

    On failure also returns a shortest cycle as a tuple of unified vertex ids
    (A-side 0..n_a-1, then B-side), the lexicographically least one among its
    rotations and reflections. BFS detection values never undercut the true
    girth: every detected closed walk traverses its closing edge once and so
    contains a simple cycle no longer than the walk.
    """
    adj = _unified_adjacency(g)
    nv = len(adj)
    cap = (gmin - 1 + 1) // 2  # depth floor((gmin-1)/2) reaches all short cycles
    found_short = False
    for root in range(nv):
        if not adj[root]:
            continue
        best = _bfs_min_cycle(adj, root, depth_cap=cap)
        if best is not None and best < gmin:
            found_short = True
            break
    if not found_short:
        return True, None
    # exact girth + canonical witness (slow path, only on failure)
    girth = None
    for root in range(nv):
        if not adj[root]:
            continue
        best = _bfs_min_cycle(adj, root)
        if best is not None and (girth is None or best < girth):
            girth = best
    best_cycle = None
    for root in range(nv):
        if not adj[root]:
            continue
        for length, cycle in _bfs_cycle_walks(adj, root):
            if length == girth and len(set(cycle)) == length:
                cand = _canonical_cycle(cycle)
                if best_cycle is None or cand < best_cycle:
                    best_cycle = cand
    return False, best_cycle


def bipartite_has_biclique(g: BipartiteGraph, a: int, b: int):
    """Complete a-by-b bipartite subgraph search, both orientations.

    Returns (a_side, b_side) vertex tuples on the hit (a_side drawn from the
    side hosting `a` vertices), or None.
    """
    from itertools import combinations

    def search(neighbors: list[int], na: int, aa: int, bb: int):
        verts = [v for v in range(na) if bin(neighbors[v]).count("1") >= bb]
        for aset in combinations(verts, aa):
            common = neighbors[aset[0]]
            for v in aset[1:]:
                common &= neighbors[v]
                if not common:
                    break
            if bin(common).count("1") >= bb:
                bits = []
                c = common
                while c:
                    low = c & -c
                    bits.append(low.bit_length() - 1)
                    c ^= low
                return aset, tuple(bits[:bb])
        return None

    nbr_a = [0] * g.n_a
    nbr_b = [0] * g.n_b
    for x, y in g.edges:
        nbr_a[x] |= 1 << y
        nbr_b[y] |= 1 << x
    hit = search(nbr_a, g.n_a, a, b)
    if hit:
        return hit
    if a != b:
        hit = search(nbr_b, g.n_b, a, b)
        if hit:
            return hit
    return None


# -- native construction -----------------------------------------------------


def c4free_partition(q: int) -> BipartitePartition:
    """Tile K_{q^2,q^2} into q classes, each certified four-cycle-free.

    Every class is q-regular on both sides: fixing (a1, a2), b1 and the class
    determine b2. Certification failure aborts; uncertified classes are never
    emitted.
    """
    if not is_prime(q):
        raise NotPrimeError(f"{q} is not prime")
    n = q * q
    elems = [FieldElement(v, q) for v in range(q)]
    classes = []
    for c in range(q):
        edges = set()
        for a1 in range(q):
            for a2 in range(q):
                for b1 in range(q):
                    b2 = (elems[a1] * elems[b1] + elems[c] - elems[a2]).value
                    edges.add((a1 * q + a2, b1 * q + b2))
        g = BipartiteGraph(n_a=n, n_b=n, edges=frozenset(edges))
        ok, cycle = verify_girth(g, 6)
        if not ok:
            raise ConstructionInvalidError(
                f"class {c} of q={q} failed girth certification: cycle {cycle}"
            )
        classes.append(g)
    p = BipartitePartition(n_a=n, n_b=n, classes=tuple(classes))
    report = verify_partition(p)
    if not report.ok:
        raise ConstructionInvalidError("classes do not tile all pairs")
    return p


def restrict_partition(p: BipartitePartition, n: int) -> BipartitePartition:
    """Induced tiling on the first n vertices of each side (classes may empty)."""
    if n > min(p.n_a, p.n_b):
        raise InvalidPartitionError("cannot restrict to a larger side")
    classes = tuple(
        BipartiteGraph(
            n_a=n,
            n_b=n,
            edges=frozenset((a, b) for a, b in g.edges if a < n and b < n),
        )
        for g in p.classes
    )
    return BipartitePartition(n_a=n, n_b=n, classes=classes)


# -- documents ---------------------------------------------------------------


def partition_to_document(p: BipartitePartition) -> dict:
    return {
        "version": DOCUMENT_VERSION,
        "kind": PARTITION_KIND,
        "n_a": p.n_a,
        "n_b": p.n_b,
        "classes": [[list(e) for e in g.sorted_edges()] for g in p.classes],
    }


def import_partition(doc: dict) -> BipartitePartition:
    """Parse a partition document and verify disjointness + coverage.

    Girth or biclique-freeness of the classes is NOT assumed here; callers run
    the relevant per-class verifier.
    """
    try:
        if doc["kind"] != PARTITION_KIND:
            raise PartitionFormatError(f"unexpected kind {doc.get('kind')!r}")
        n_a, n_b = int(doc["n_a"]), int(doc["n_b"])
        classes = tuple(
            BipartiteGraph(
                n_a=n_a,
                n_b=n_b,
                edges=frozenset((int(a), int(b)) for a, b in cls),
            )
            for cls in doc["classes"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise PartitionFormatError(f"malformed partition document: {exc}") from exc
    p = BipartitePartition(n_a=n_a, n_b=n_b, classes=classes)
    report = verify_partition(p)
    if not report.ok:
        raise InvalidPartitionError(
            f"classes do not tile all pairs: {len(report.duplicated)} duplicated, "
            f"{report.expected_pairs - report.covered_pairs} missing"
        )
    return p


def save_partition(path: str | Path, p: BipartitePartition) -> None:
    doc = partition_to_document(p)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            '{"version":%d,"kind":"%s","n_a":%d,"n_b":%d,"classes":['
            % (doc["version"], doc["kind"], doc["n_a"], doc["n_b"])
        )
        parts = []
        for cls in doc["classes"]:
            parts.append("[%s]" % ",".join("[%d,%d]" % (e[0], e[1]) for e in cls))
        fh.write(",".join(parts))
        fh.write("]}\n")


def load_partition(path: str | Path) -> BipartitePartition:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise PartitionFormatError(f"not valid JSON: {exc}") from exc
    return import_partition(doc)
