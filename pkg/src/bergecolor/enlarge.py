"""Vertex enlargement of bipartite graphs and the shifted-copy tiling that
colors the complete multipartite uniform hypergraph from a bipartite tiling.

Enlarging replaces each left vertex by s fresh vertices and each right vertex
by t, turning every graph edge into one (s+t)-uniform hyperedge. Tiling the
complete (s+t)-partite host works by translating enlarged copies: the edge
(v1..v_{s+t}) gets the color (i, d2..ds, e2..et) where i is the class of the
pair (v1, v_{s+1}) and the d/e entries are the coordinate differences to the
first coordinate on each side, mod n. With T classes that is exactly
T * n^(s+t-2) colors, and because the input tiles all pairs, the color
classes partition the host's edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .bipartite import BipartitePartition, verify_partition
from .errors import (
    ConstructionInvalidError,
    SizeMismatchError,
    UnverifiedPartitionError,
)
from .model import BipartiteGraph, Coloring, Hypergraph, _min_dtype


@dataclass(frozen=True)
class EnlargementSpec:
    """Copies per left vertex (s) and per right vertex (t); uniformity s+t."""

    s: int
    t: int

    def __post_init__(self):
        if self.s < 1 or self.t < 1:
            raise ValueError("s and t must be positive")

    @property
    def r(self) -> int:
        return self.s + self.t


@dataclass(frozen=True)
class ShiftVector:
    """Translations for the auxiliary coordinates, s-1 then t-1 residues."""

    a_shifts: tuple[int, ...]
    b_shifts: tuple[int, ...]

    def validated(self, spec: EnlargementSpec, n: int) -> "ShiftVector":
        if len(self.a_shifts) != spec.s - 1 or len(self.b_shifts) != spec.t - 1:
            raise ValueError("shift lengths must be s-1 and t-1")
        for v in self.a_shifts + self.b_shifts:
            if not (0 <= v < n):
                raise ValueError(f"shift {v} outside 0..{n - 1}")
        return self


def enlarge(g: BipartiteGraph, spec: EnlargementSpec) -> Hypergraph:
    """One (s+t)-edge per graph edge; copies of each source vertex contiguous.

    Left vertex v owns ids v*s..v*s+s-1; right vertex u owns
    s*n_a + u*t..+t-1. Edge count is preserved.
    """
    s, t = spec.s, spec.t
    n = s * g.n_a + t * g.n_b
    base_b = s * g.n_a
    rows = []
    for a, b in sorted(g.edges):
        rows.append(
            [a * s + k for k in range(s)] + [base_b + b * t + k for k in range(t)]
        )
    arr = np.array(rows, dtype=_min_dtype(max(n, 1))).reshape(len(rows), spec.r)
    return Hypergraph(n=n, r=spec.r, edges=arr)


def shifted_copy(
    g: BipartiteGraph, spec: EnlargementSpec, shifts: ShiftVector, n: int
) -> Hypergraph:
    """Translated enlarged copy inside the (s+t)-partite frame, parts of size n.

    Coordinate k of each edge lives in part k; side coordinates are u,
    u+a_2, ..., u+a_s and v, v+b_2, ..., v+b_t mod n. All-zero shifts give a
    part-indexed relabeling of enlarge(g, spec).
    """
    if g.n_a != g.n_b or g.n_a != n:
        raise SizeMismatchError("shifted copies need equal side sizes n_a = n_b = n")
    shifts.validated(spec, n)
    s, t = spec.s, spec.t
    r = spec.r
    rows = []
    for u, v in sorted(g.edges):
        coords = [u] + [(u + d) % n for d in shifts.a_shifts]
        coords += [v] + [(v + d) % n for d in shifts.b_shifts]
        rows.append([k * n + c for k, c in enumerate(coords)])
    arr = np.array(rows, dtype=_min_dtype(r * n)).reshape(len(rows), r)
    parts = [(k * n, (k + 1) * n) for k in range(r)]
    return Hypergraph.from_array(n=r * n, r=r, edges=arr, parts=parts)


def pair_class_table(
    p: BipartitePartition, allow_cover: bool = False
) -> tuple[np.ndarray, int]:
    """(n_a, n_b) array mapping each pair to its class index.

    Requires a verified tiling; with allow_cover, duplicated pairs resolve to
    the smallest class index but full coverage is still mandatory.
    """
    report = verify_partition(p)
    if not report.ok:
        uncovered = report.expected_pairs - report.covered_pairs
        if uncovered or not allow_cover:
            raise UnverifiedPartitionError(
                f"input is not a verified partition ({len(report.duplicated)} "
                f"duplicated, {uncovered} missing pairs)"
            )
    table = np.full((p.n_a, p.n_b), -1, dtype=np.int32)
    for i, g in enumerate(p.classes):
        for a, b in g.edges:
            if table[a, b] < 0:
                table[a, b] = i
    return table, p.num_classes


class CoverBaseColorer:
    """Per-edge color labels for complete multipartite hosts of any size up to
    the tiling's side size; restriction preserves both the tiling property and
    class freeness, so one table serves every recursion level."""

    def __init__(self, p: BipartitePartition, spec: EnlargementSpec, allow_cover=False):
        if p.n_a != p.n_b:
            raise SizeMismatchError("tiling must have equal sides")
        self.spec = spec
        self.side = p.n_a
        self.table, self.num_classes = pair_class_table(p, allow_cover=allow_cover)
        for i, g in enumerate(p.classes):
            if g.edge_count == 0:
                raise UnverifiedPartitionError(f"class {i} is empty")

    def colors_full(self, size: int) -> int:
        return self.num_classes * size ** (self.spec.r - 2)

    def label_edges(self, size: int, coords: np.ndarray, collect: bool):
        """coords: (N, r) per-part coordinates; returns (idx, count, labels)."""
        s, t = self.spec.s, self.spec.t
        if coords.shape[1] != self.spec.r:
            raise SizeMismatchError("coordinate width disagrees with s+t")
        if size > self.side:
            raise SizeMismatchError("host size exceeds tiling side")
        c = coords.astype(np.int64)
        key = self.table[c[:, 0], c[:, s]].astype(np.int64)
        aux = list(range(1, s)) + list(range(s + 1, s + t))
        for col in aux:
            anchor = c[:, 0] if col < s else c[:, s]
            key = key * size + (c[:, col] - anchor) % size
        uniq, inv = np.unique(key, return_inverse=True)
        labels = None
        if collect:
            dims = len(aux)
            labels = []
            for k in uniq.tolist():
                digits = []
                for _ in range(dims):
                    k, d = divmod(k, size)
                    digits.append(d)
                digits.reverse()
                tag = f"cover:{k}"
                if digits:
                    tag += ":" + ",".join(map(str, digits))
                labels.append((tag,))
        return inv.astype(np.int64), len(uniq), labels


def multipartite_cover(
    p: BipartitePartition,
    spec: EnlargementSpec,
    n: int,
    allow_cover: bool = False,
) -> Coloring:
    """Color the complete (s+t)-partite host, n vertices per part.

    Every edge gets the color of its translated-copy membership; the result is
    a partition into exactly T * n^(s+t-2) classes, each a translated enlarged
    copy of one tiling class (hence inheriting that class's certified
    freeness). Classes must be nonempty so the count is exact.
    """
    if p.n_a != p.n_b or p.n_a != n:
        raise SizeMismatchError("tiling sides must equal the part size n")
    base = CoverBaseColorer(p, spec, allow_cover=allow_cover)
    r = spec.r
    coords = np.indices((n,) * r).reshape(r, -1).T.astype(np.int64)
    idx, count, labels = base.label_edges(n, coords, collect=True)
    expected = base.colors_full(n)
    # overlapping covers may route every pair past a redundant class
    if count != expected and not (allow_cover and count < expected):
        raise ConstructionInvalidError(
            f"used {count} colors, expected exactly {expected}"
        )
    offsets = np.arange(r, dtype=np.int64) * n
    edges = coords + offsets[None, :]
    parts = [(k * n, (k + 1) * n) for k in range(r)]
    host = Hypergraph(
        n=r * n,
        r=r,
        edges=edges.astype(_min_dtype(r * n)),
        parts=tuple(parts),
    )
    return Coloring(host=host, colors=idx, palette=tuple(labels))


def enlargement_isomorphic_relabel(
    g: BipartiteGraph, spec: EnlargementSpec
) -> dict[int, int]:
    """Vertex map from enlarge(g, spec) ids into the zero-shift copy's ids."""
    s, t = spec.s, spec.t
    n = g.n_a
    out = {}
    for v in range(g.n_a):
        for k in range(s):
            out[v * s + k] = k * n + v
    base_b = s * g.n_a
    for u in range(g.n_b):
        for k in range(t):
            out[base_b + u * t + k] = (s + k) * n + u
    return out
