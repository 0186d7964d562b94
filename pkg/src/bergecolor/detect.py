"""Exact containment tests for Berge cycles and Berge bicliques.

A host contains a Berge-C_g when there are g distinct core vertices v_1..v_g
and g distinct host edges e_1..e_g with {v_i, v_{i+1}} inside e_i (indices mod
g); Berge-K_{a,b} asks for disjoint core sides and an injective assignment of
a*b distinct edges to the side pairs. Detection enumerates canonical core
patterns in the pair shadow (rotation- and reflection-reduced, smallest vertex
first) and decides the distinct-edge requirement by bipartite matching between
core pairs and the host edges containing them. Any witness returned is the
lexicographically least core with its least edge assignment, so results are
reproducible and independent of input edge order.

A brute-force oracle with the same semantics but none of the machinery backs
the detectors in tests.
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import OracleTooLargeError
from .model import Coloring, Edge, Hypergraph, Witness


@dataclass(frozen=True)
class CyclePattern:
    length: int

    def __post_init__(self):
        if self.length < 2:
            raise ValueError("cycle length must be at least 2")

    @property
    def min_edges(self) -> int:
        return self.length

    def __str__(self):
        return f"cycle:{self.length}"


@dataclass(frozen=True)
class BicliquePattern:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError("biclique sides must be positive")

    @property
    def min_edges(self) -> int:
        return self.a * self.b

    def __str__(self):
        return f"biclique:{self.a},{self.b}"


Pattern = CyclePattern | BicliquePattern


@dataclass(frozen=True)
class ForbiddenFamily:
    """Patterns whose Berge forms no color class may contain.

    All supported patterns are connected graphs, which is what makes
    vertex-disjoint unions of free classes free again.
    """

    patterns: tuple[Pattern, ...]

    @classmethod
    def cycles(cls, m: int) -> "ForbiddenFamily":
        return cls((CyclePattern(2 * m), CyclePattern(2 * m + 1)))

    @classmethod
    def parse(cls, text: str) -> "ForbiddenFamily":
        """Parse specs like "cycle:4,cycle:5" or "biclique:2,2".

        A bare integer token continues the preceding biclique, so both
        "biclique:2,2" and "biclique:2:2" are accepted.
        """
        patterns: list[Pattern] = []
        pending: int | None = None
        for token in text.split(","):
            token = token.strip()
            if not token:
                continue
            if token.isdigit():
                if pending is None:
                    raise ValueError(f"dangling integer {token!r} in family spec")
                patterns.append(BicliquePattern(pending, int(token)))
                pending = None
                continue
            if pending is not None:
                raise ValueError("biclique spec missing its second side")
            kind, _, rest = token.partition(":")
            if kind == "cycle":
                patterns.append(CyclePattern(int(rest)))
            elif kind == "biclique":
                if ":" in rest:
                    a, b = rest.split(":")
                    patterns.append(BicliquePattern(int(a), int(b)))
                else:
                    pending = int(rest)
            else:
                raise ValueError(f"unknown pattern kind {kind!r}")
        if pending is not None:
            raise ValueError("biclique spec missing its second side")
        if not patterns:
            raise ValueError("empty family spec")
        return cls(tuple(patterns))

    @property
    def min_edges(self) -> int:
        return min(p.min_edges for p in self.patterns)

    def __str__(self):
        return ",".join(str(p) for p in self.patterns)

    def required_girth(self) -> int:
        """Smallest bipartite-ingredient girth that makes enlargements free."""
        need = 0
        for p in self.patterns:
            if isinstance(p, CyclePattern):
                need = max(need, 2 * (p.length // 2) + 2)
        return need

    def max_side_copies(self) -> int:
        """Strict upper bound on each enlargement side size."""
        bound = None
        for p in self.patterns:
            limit = (
                2 * (p.length // 2) if isinstance(p, CyclePattern) else p.a + p.b
            )
            bound = limit if bound is None else min(bound, limit)
        return bound if bound is not None else 1 << 30


# -- host preparation --------------------------------------------------------


def _edge_tuples(host) -> list[Edge]:
    if isinstance(host, Hypergraph):
        return [tuple(int(v) for v in row) for row in host.edges]
    if isinstance(host, np.ndarray):
        return [tuple(int(v) for v in row) for row in host]
    return [tuple(int(v) for v in e) for e in host]


class _Shadow:
    """Pair shadow of a small host: compact ids, bitset adjacency, pair index."""

    def __init__(self, edges: list[Edge]):
        verts = sorted({v for e in edges for v in e})
        self.verts = verts
        self.index = {v: i for i, v in enumerate(verts)}
        self.nv = len(verts)
        self.edges = edges
        adj = [0] * self.nv
        vert_edges: list[list[int]] = [[] for _ in range(self.nv)]
        pair_edges: dict[tuple[int, int], list[int]] = defaultdict(list)
        for ei, e in enumerate(edges):
            ce = [self.index[v] for v in e]
            for i in range(len(ce)):
                a = ce[i]
                vert_edges[a].append(ei)
                for j in range(i + 1, len(ce)):
                    b = ce[j]
                    pair_edges[(a, b)].append(ei)
                    adj[a] |= 1 << b
                    adj[b] |= 1 << a
        self.adj = adj
        self.vert_edges = vert_edges
        self.pair_edges = pair_edges

    def candidates(self, a: int, b: int) -> list[int]:
        return self.pair_edges.get((a, b) if a < b else (b, a), [])

    def component_start_mask(self, min_edges: int) -> int:
        """Bitmask of vertices whose component holds at least min_edges edges.

        Every witness is connected, so cores confined to smaller components
        can be skipped wholesale.
        """
        parent = list(range(self.nv))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            base = self.index[e[0]]
            for v in e[1:]:
                ra, rb = find(base), find(self.index[v])
                if ra != rb:
                    parent[rb] = ra
        edge_count: dict[int, int] = defaultdict(int)
        for e in self.edges:
            edge_count[find(self.index[e[0]])] += 1
        mask = 0
        for x in range(self.nv):
            if edge_count.get(find(x), 0) >= min_edges:
                mask |= 1 << x
        return mask

    def reach_masks(self, x: int, depth: int) -> list[int]:
        """reach[d] = vertices within distance d of x (cumulative masks)."""
        seen = 1 << x
        frontier = seen
        reach = [seen]
        for _ in range(depth):
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= self.adj[low.bit_length() - 1]
                f ^= low
            frontier = nxt & ~seen
            seen |= nxt
            reach.append(seen)
            if not frontier:
                break
        return reach


def _iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


# -- distinct-edge assignment --------------------------------------------------


def _matchable(cands: Sequence[Sequence[int]]) -> bool:
    """Can every position take a distinct edge id (augmenting paths)?"""
    owner: dict[int, int] = {}
    order = sorted(range(len(cands)), key=lambda i: len(cands[i]))

    def augment(pos: int, banned: set[int]) -> bool:
        for e in cands[pos]:
            if e in banned:
                continue
            banned.add(e)
            if e not in owner or augment(owner[e], banned):
                owner[e] = pos
                return True
        return False

    for pos in order:
        if not cands[pos]:
            return False
        if not augment(pos, set()):
            return False
    return True


def _least_assignment(cands: Sequence[Sequence[int]]) -> list[int] | None:
    """Lexicographically least injective edge choice, or None."""
    if not _matchable(cands):
        return None
    chosen: list[int] = []
    used: set[int] = set()
    k = len(cands)
    for pos in range(k):
        for e in cands[pos]:
            if e in used:
                continue
            rest = [
                [x for x in cands[p] if x != e and x not in used]
                for p in range(pos + 1, k)
            ]
            if _matchable(rest):
                chosen.append(e)
                used.add(e)
                break
        else:
            return None
    return chosen


# -- cycle detection -------------------------------------------------------------


def contains_berge_cycle(host, g: int) -> Witness | None:
    """Witness of a Berge cycle of length g, or None. Exact.

    Length 2 degenerates to two distinct edges sharing a vertex pair.
    """
    if g < 2:
        raise ValueError("cycle length must be at least 2")
    edges = _edge_tuples(host)
    if len(edges) < g:
        return None
    sh = _Shadow(edges)
    allowed = sh.component_start_mask(g)
    if not allowed:
        return None
    if g == 2:
        for (a, b), cand in sorted(sh.pair_edges.items()):
            if len(cand) >= 2:
                core = (sh.verts[a], sh.verts[b])
                e1, e2 = edges[cand[0]], edges[cand[1]]
                return Witness(
                    kind="cycle",
                    params=(2,),
                    core=core,
                    edge_map=(((core[0], core[1]), e1), ((core[1], core[0]), e2)),
                )
        return None
    if not _collapsed_cycle_exists(sh, g, allowed):
        return None
    wit = _cycle_search(sh, g, allowed)
    if wit is None:
        raise AssertionError("collapsed decision and witness search disagree")
    return wit


def _collapsed_cycle_exists(sh: _Shadow, g: int, allowed: int) -> bool:
    """Exact existence decision on the twin-collapsed shadow.

    Vertices lying in exactly the same host edges are interchangeable as core
    vertices: collapsing them into one weighted class preserves every
    candidate-edge list, and a class cycle with per-class usage at most the
    class size lifts to distinct vertices. Hosts built by vertex enlargement
    collapse drastically, which is what makes exhaustive "no" answers cheap;
    twin-free hosts collapse to themselves and lose nothing.
    """
    key_of: dict[tuple[int, ...], int] = {}
    cls_of = [0] * sh.nv
    cls_inc: list[list[int]] = []
    cls_size: list[int] = []
    for v in range(sh.nv):
        key = tuple(sh.vert_edges[v])
        ci = key_of.get(key)
        if ci is None:
            ci = len(cls_inc)
            key_of[key] = ci
            cls_inc.append(sh.vert_edges[v])
            cls_size.append(0)
        cls_of[v] = ci
        cls_size[ci] += 1
    nc = len(cls_inc)
    pair_cands: dict[tuple[int, int], list[int]] = {}
    cadj = [0] * nc
    for ei, e in enumerate(sh.edges):
        cset = sorted({cls_of[sh.index[v]] for v in e})
        for i in range(len(cset)):
            for j in range(i + 1, len(cset)):
                a, b = cset[i], cset[j]
                pair_cands.setdefault((a, b), []).append(ei)
                cadj[a] |= 1 << b
                cadj[b] |= 1 << a
    callowed = 0
    for v in range(sh.nv):
        if (allowed >> v) & 1:
            callowed |= 1 << cls_of[v]
    emask_cache: dict[tuple[int, int], int] = {}

    def edge_mask(a: int, b: int) -> int:
        if a == b:
            key = (a, a)
            got = emask_cache.get(key)
            if got is None:
                got = 0
                for ei in cls_inc[a]:
                    got |= 1 << ei
                emask_cache[key] = got
            return got
        key = (a, b) if a < b else (b, a)
        got = emask_cache.get(key)
        if got is None:
            got = 0
            for ei in pair_cands.get(key, ()):
                got |= 1 << ei
            emask_cache[key] = got
        return got

    def cand_list(a: int, b: int):
        if a == b:
            return cls_inc[a]
        return pair_cands.get((a, b) if a < b else (b, a), ())

    def step_ok(a: int, b: int) -> bool:
        if a == b:
            return cls_size[a] >= 2 and bool(cls_inc[a])
        key = (a, b) if a < b else (b, a)
        return key in pair_cands

    full = (1 << nc) - 1
    usage = [0] * nc

    def extend(start: int, seq: list[int], union: int, reach) -> bool:
        depth = len(seq)
        if depth == g:
            if not step_ok(seq[-1], start):
                return False
            # reflection: canonical direction only (ties from repeats kept)
            if seq[1] > seq[-1]:
                return False
            union |= edge_mask(seq[-1], start)
            if bin(union).count("1") < g:
                return False
            cands = [
                cand_list(seq[i], seq[(i + 1) % g]) for i in range(g)
            ]
            return _matchable(cands)
        steps_back = g - depth
        limit = reach[steps_back] if steps_back < len(reach) else reach[-1]
        last = seq[-1]
        options = (cadj[last] | (1 << last)) & limit
        # minimal class stays first: never go below the start
        options &= full << start
        for c in _iter_bits(options):
            if usage[c] >= cls_size[c]:
                continue
            if not step_ok(last, c):
                continue
            new_union = union | edge_mask(last, c)
            if bin(new_union).count("1") < depth:
                continue
            usage[c] += 1
            seq.append(c)
            if extend(start, seq, new_union, reach):
                return True
            seq.pop()
            usage[c] -= 1
        return False

    for start in range(nc):
        if not (callowed >> start) & 1:
            continue
        # reach over classes; staying in place never shortens the way back
        reach = _class_reach(cadj, start, g - 1)
        usage[start] = 1
        if extend(start, [start], 0, reach):
            usage[start] = 0
            return True
        usage[start] = 0
    return False


def _class_reach(cadj: list[int], start: int, depth: int) -> list[int]:
    seen = 1 << start
    frontier = seen
    reach = [seen]
    for _ in range(depth):
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= cadj[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= nxt
        reach.append(seen)
        if not frontier:
            break
    return reach


def _cycle_search(sh: _Shadow, g: int, allowed: int) -> Witness | None:
    nv = sh.nv
    full = (1 << nv) - 1
    for x in range(nv):
        if not (allowed >> x) & 1:
            continue
        reach = sh.reach_masks(x, g - 1)

        def bound(steps: int) -> int:
            return reach[steps] if steps < len(reach) else reach[-1]

        above_x = full & (full << (x + 1))
        wit = _extend_cycle(sh, g, x, [x], 1 << x, above_x, bound)
        if wit is not None:
            return wit
    return None


def _extend_cycle(sh, g, x, path, path_mask, above_x, bound) -> Witness | None:
    depth = len(path)
    # after appending the next vertex, g - depth edges remain to close at x
    cand_mask = sh.adj[path[-1]] & above_x & ~path_mask & bound(g - depth)
    if depth == g - 1:
        cand_mask &= sh.adj[x]
        # reflection canon: second core vertex smaller than the closing one
        cand_mask &= -1 << (path[1] + 1)
    for v in _iter_bits(cand_mask):
        path.append(v)
        if depth == g - 1:
            wit = _finish_cycle(sh, path)
        else:
            wit = _extend_cycle(sh, g, x, path, path_mask | (1 << v), above_x, bound)
        if wit is not None:
            return wit
        path.pop()
    return None


def _finish_cycle(sh: _Shadow, path: list[int]) -> Witness | None:
    g = len(path)
    pairs = [(path[i], path[(i + 1) % g]) for i in range(g)]
    cands = [sh.candidates(a, b) for a, b in pairs]
    assign = _least_assignment(cands)
    if assign is None:
        return None
    core = tuple(sh.verts[v] for v in path)
    edge_map = tuple(
        ((core[i], core[(i + 1) % g]), sh.edges[assign[i]]) for i in range(g)
    )
    return Witness(kind="cycle", params=(g,), core=core, edge_map=edge_map)


# -- biclique detection ------------------------------------------------------------


def contains_berge_biclique(host, a: int, b: int) -> Witness | None:
    """Witness of a Berge complete bipartite a-by-b pattern, or None. Exact."""
    if a < 1 or b < 1:
        raise ValueError("biclique sides must be positive")
    edges = _edge_tuples(host)
    if len(edges) < a * b:
        return None
    sh = _Shadow(edges)
    allowed = sh.component_start_mask(a * b)
    if not allowed:
        return None
    adj = sh.adj
    nv = sh.nv

    def left_sides(prefix: list[int], common: int):
        if len(prefix) == a:
            yield tuple(prefix), common
            return
        start = prefix[-1] + 1 if prefix else 0
        for v in range(start, nv):
            if not prefix:
                if not (allowed >> v) & 1:
                    continue
                nxt = adj[v]
            else:
                nxt = common & adj[v]
            if bin(nxt).count("1") >= b:
                yield from left_sides(prefix + [v], nxt)

    for aset, common in left_sides([], 0):
        pool_mask = common
        for v in aset:
            pool_mask &= ~(1 << v)
        if a == b:
            # canonical: the left side owns the smallest core vertex
            pool_mask &= -1 << (aset[0] + 1)
        pool = list(_iter_bits(pool_mask))
        if len(pool) < b:
            continue
        for bset in combinations(pool, b):
            cands = [sh.candidates(u, v) for u in aset for v in bset]
            assign = _least_assignment(cands)
            if assign is None:
                continue
            core = tuple(sh.verts[v] for v in aset) + tuple(
                sh.verts[v] for v in bset
            )
            pairs = [(sh.verts[u], sh.verts[v]) for u in aset for v in bset]
            edge_map = tuple(
                (pairs[i], sh.edges[assign[i]]) for i in range(len(pairs))
            )
            return Witness(
                kind="biclique", params=(a, b), core=core, edge_map=edge_map
            )
    return None


def find_pattern(host, pattern: Pattern) -> Witness | None:
    if isinstance(pattern, CyclePattern):
        return contains_berge_cycle(host, pattern.length)
    return contains_berge_biclique(host, pattern.a, pattern.b)


# -- brute-force oracle ---------------------------------------------------------------


def _pattern_core(pattern: Pattern) -> tuple[int, list[tuple[int, int]]]:
    if isinstance(pattern, CyclePattern):
        g = pattern.length
        return g, [(i, (i + 1) % g) for i in range(g)]
    a, b = pattern.a, pattern.b
    return a + b, [(i, a + j) for i in range(a) for j in range(b)]


def naive_berge_contains(host, pattern: Pattern) -> bool:
    """Brute force over all core-vertex injections and injective edge picks.

    Independent of the shadow/matching machinery; capped at 10 core vertices
    and 12 host edges.
    """
    n_core, core_edges = _pattern_core(pattern)
    edges = _edge_tuples(host)
    if n_core > 10 or len(edges) > 12:
        raise OracleTooLargeError("instance exceeds oracle caps (10 core, 12 edges)")
    if len(edges) < len(core_edges):
        return False
    verts = sorted({v for e in edges for v in e})
    if len(verts) < n_core:
        return False
    esets = [frozenset(e) for e in edges]
    pair_ok = set()
    for es in esets:
        vs = sorted(es)
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                pair_ok.add((vs[i], vs[j]))
    closing = [
        [(u, w) for (u, w) in core_edges if max(u, w) == k] for k in range(n_core)
    ]

    def assign_edges(j: int, image: list[int], used: int) -> bool:
        if j == len(core_edges):
            return True
        u, w = core_edges[j]
        need_u, need_w = image[u], image[w]
        for ei, es in enumerate(esets):
            if (used >> ei) & 1:
                continue
            if need_u in es and need_w in es:
                if assign_edges(j + 1, image, used | (1 << ei)):
                    return True
        return False

    image = [-1] * n_core
    taken: set[int] = set()

    def place(k: int) -> bool:
        if k == n_core:
            return assign_edges(0, image, 0)
        for v in verts:
            if v in taken:
                continue
            ok = True
            for (u, w) in closing[k]:
                other = image[u] if w == k else image[w]
                p = (other, v) if other < v else (v, other)
                if p not in pair_ok:
                    ok = False
                    break
            if not ok:
                continue
            image[k] = v
            taken.add(v)
            if place(k + 1):
                return True
            taken.remove(v)
            image[k] = -1
        return False

    return place(0)


# -- coloring-wide verification ----------------------------------------------------------


@dataclass(frozen=True)
class ClassStatus:
    color: int
    size: int
    status: str  # "free" | "witness" | "skipped-small" | "skipped-disjoint"
    witness: Witness | None = None

    def to_dict(self) -> dict:
        return {
            "color": self.color,
            "size": self.size,
            "status": self.status,
            "witness": self.witness.to_dict() if self.witness else None,
        }


@dataclass(frozen=True)
class FreenessReport:
    passed: bool
    family: str
    n_classes: int
    n_checked: int
    n_skipped_small: int
    n_skipped_sparse: int
    failures: tuple[ClassStatus, ...]
    elapsed_s: float
    classes: tuple[ClassStatus, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "family": self.family,
            "n_classes": self.n_classes,
            "n_checked": self.n_checked,
            "n_skipped_small": self.n_skipped_small,
            "n_skipped_sparse": self.n_skipped_sparse,
            "failures": [c.to_dict() for c in self.failures],
            "elapsed_s": round(self.elapsed_s, 3),
            "classes": [c.to_dict() for c in self.classes] if self.classes else None,
        }


def _class_excess(
    ordered_edges: np.ndarray,
    class_of_row: np.ndarray,
    starts: np.ndarray,
    stops: np.ndarray,
    sizes: np.ndarray,
    n: int,
) -> np.ndarray:
    """Per class: repeated vertex slots (size*r minus distinct vertices).

    A connected sub-collection of k edges needs k-1 intersecting pairs in any
    spanning tree of its intersection graph, each consuming at least one
    repeated slot, so the largest component has at most excess+1 edges. A
    class with excess+1 below the smallest pattern size cannot host any
    witness. Computed in chunks aligned to class boundaries.
    """
    k = len(sizes)
    excess = np.zeros(k, dtype=np.int64)
    if k == 0:
        return excess
    r = ordered_edges.shape[1]
    target = max(1, 6_000_000 // r)
    pos = 0
    while pos < k:
        j = int(np.searchsorted(stops, starts[pos] + target, side="left")) + 1
        j = min(max(j, pos + 1), k)
        lo, hi = int(starts[pos]), int(stops[j - 1])
        flat = ordered_edges[lo:hi].astype(np.int64)
        local = (class_of_row[lo:hi].astype(np.int64) - pos)[:, None]
        keys = (local * n + flat).ravel()
        distinct = np.bincount(np.unique(keys) // n, minlength=j - pos)
        excess[pos:j] = sizes[pos:j] * r - distinct
        pos = j
    return excess


def _components(edges: list[Edge]) -> list[list[Edge]]:
    """Connected components of an edge list (edges sharing vertices)."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        base = find(e[0])
        for v in e[1:]:
            rb = find(v)
            if rb != base:
                parent[rb] = base
                base = find(base)
    grouped: dict[int, list[Edge]] = defaultdict(list)
    for e in edges:
        grouped[find(e[0])].append(e)
    return list(grouped.values())


def _normalized(edges: list[Edge]) -> tuple[tuple[int, ...], ...]:
    """Order-preserving relabel to 0..k-1; identical for translated copies."""
    verts = sorted({v for e in edges for v in e})
    rank = {v: i for i, v in enumerate(verts)}
    return tuple(sorted(tuple(rank[v] for v in e) for e in edges))


def verify_coloring_free(
    coloring: Coloring,
    family: ForbiddenFamily,
    detail_cap: int = 2000,
) -> FreenessReport:
    """Run every detector on every color class; pass iff zero witnesses.

    Classes too small to host any pattern are skipped outright, classes whose
    repeated-vertex budget cannot connect enough edges are skipped by the
    excess bound (only valid when every pattern needs at least two edges),
    and the detectors run per connected component with results memoized on
    the translation-normalized component, since builders emit many shifted
    copies of the same local structure.
    """
    t0 = time.perf_counter()
    colors = np.asarray(coloring.colors)
    m = len(colors)
    host = coloring.host
    if m == 0:
        return FreenessReport(
            passed=True,
            family=str(family),
            n_classes=0,
            n_checked=0,
            n_skipped_small=0,
            n_skipped_sparse=0,
            failures=(),
            elapsed_s=time.perf_counter() - t0,
            classes=(),
        )
    order = np.argsort(colors, kind="stable")
    sorted_colors = colors[order]
    ordered_edges = host.edges[order]
    boundaries = np.flatnonzero(np.diff(sorted_colors)) + 1
    starts = np.concatenate(([0], boundaries))
    stops = np.concatenate((boundaries, [m]))
    class_ids = sorted_colors[starts]
    sizes = stops - starts
    k = len(class_ids)
    class_of_row = np.repeat(np.arange(k, dtype=np.int64), sizes)

    min_need = family.min_edges
    candidate = sizes >= min_need
    n_small = int((~candidate).sum())
    if min_need >= 2:
        excess = _class_excess(
            ordered_edges, class_of_row, starts, stops, sizes, host.n
        )
        sparse = excess + 1 < min_need
    else:
        sparse = np.zeros(k, dtype=bool)
    n_sparse = int((candidate & sparse).sum())
    to_check = np.flatnonzero(candidate & ~sparse)

    failures: list[ClassStatus] = []
    detail: list[ClassStatus] | None = [] if k <= detail_cap else None
    if detail is not None:
        for ci in range(k):
            if not candidate[ci]:
                detail.append(
                    ClassStatus(int(class_ids[ci]), int(sizes[ci]), "skipped-small")
                )
            elif sparse[ci]:
                detail.append(
                    ClassStatus(int(class_ids[ci]), int(sizes[ci]), "skipped-sparse")
                )
    n_checked = 0
    memo: dict[tuple, bool] = {}
    for ci in to_check:
        rows = ordered_edges[starts[ci] : stops[ci]]
        edges = [tuple(int(v) for v in row) for row in rows.tolist()]
        n_checked += 1
        wit = None
        comps = _components(edges) if len(edges) > 1 else [edges]
        for p in family.patterns:
            if len(edges) < p.min_edges:
                continue
            hit = False
            for comp in comps:
                if len(comp) < p.min_edges:
                    continue
                key = (_normalized(comp), str(p))
                cached = memo.get(key)
                if cached is None:
                    cached = find_pattern(key[0], p) is not None
                    memo[key] = cached
                if cached:
                    hit = True
                    break
            if hit:
                wit = find_pattern(edges, p)
                if wit is None:
                    raise AssertionError("memoized hit without a class witness")
                break
        status = ClassStatus(
            int(class_ids[ci]),
            int(sizes[ci]),
            "witness" if wit else "free",
            witness=wit,
        )
        if wit is not None:
            failures.append(status)
        if detail is not None:
            detail.append(status)
    if detail is not None:
        detail.sort(key=lambda c: c.color)
    return FreenessReport(
        passed=not failures,
        family=str(family),
        n_classes=k,
        n_checked=n_checked,
        n_skipped_small=n_small,
        n_skipped_sparse=n_sparse,
        failures=tuple(failures),
        elapsed_s=time.perf_counter() - t0,
        classes=tuple(detail) if detail is not None else None,
    )
