"""Core data model: uniform hypergraphs, bipartite graphs, colorings, witnesses.

All values are immutable after construction and safe to share across threads.
Edge sets of large hosts are held as numpy arrays in canonical (lexicographic)
row order; the same order is the on-disk canonical form, so serialize ->
parse -> serialize is byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    EmptyDomainError,
    InvalidEdgeError,
    InvalidVertexError,
)

Edge = tuple[int, ...]

DOCUMENT_VERSION = 1


def canonical_edge(vertices: Iterable[int], n: int | None = None) -> Edge:
    """Sort a vertex list into a canonical edge tuple.

    Idempotent on already-sorted input. Raises InvalidEdgeError on duplicate
    vertices and InvalidVertexError on negative ids or, when ``n`` is given,
    ids >= n.
    """
    vs = tuple(int(v) for v in vertices)
    for v in vs:
        if v < 0 or (n is not None and v >= n):
            raise InvalidVertexError(f"vertex {v} out of range")
    out = tuple(sorted(vs))
    for a, b in zip(out, out[1:]):
        if a == b:
            raise InvalidEdgeError(f"duplicate vertex {a} in edge")
    return out


def complete_edges(n: int, r: int) -> Iterator[Edge]:
    """Stream all C(n, r) edges of the complete r-uniform host in lex order."""
    if r > n:
        raise EmptyDomainError(f"uniformity {r} exceeds vertex count {n}")
    import itertools

    return itertools.combinations(range(n), r)


def _min_dtype(n: int) -> np.dtype:
    if n <= np.iinfo(np.uint8).max:
        return np.dtype(np.uint8)
    if n <= np.iinfo(np.uint16).max:
        return np.dtype(np.uint16)
    return np.dtype(np.int64)


def _rows_lex_sorted(a: np.ndarray) -> bool:
    if len(a) <= 1:
        return True
    prev, cur = a[:-1], a[1:]
    # first column where consecutive rows differ decides the comparison
    for c in range(a.shape[1]):
        lt = prev[:, c] < cur[:, c]
        gt = prev[:, c] > cur[:, c]
        if c == 0:
            strictly_less = lt.copy()
            undecided = ~(lt | gt)
        else:
            strictly_less |= undecided & lt
            undecided &= ~(lt | gt)
    if undecided.any():
        return False  # duplicate rows
    return bool(strictly_less.all())


def _lexsort_rows(a: np.ndarray) -> np.ndarray:
    order = np.lexsort(tuple(a[:, c] for c in range(a.shape[1] - 1, -1, -1)))
    return a[order], order


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """r-uniform hypergraph on vertices 0..n-1.

    ``edges`` is an (m, r) integer array with strictly increasing entries per
    row, rows in lexicographic order with no duplicates. ``parts``, when
    present, is a tuple of (start, stop) ranges that are disjoint and cover a
    prefix of 0..n-1, so part membership is an O(1) arithmetic test.
    """

    n: int
    r: int
    edges: np.ndarray
    parts: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if self.r < 2:
            raise InvalidEdgeError("uniformity must be at least 2")
        e = self.edges
        if e.ndim != 2 or e.shape[1] != self.r:
            raise InvalidEdgeError(f"edge array must be (m, {self.r})")
        if len(e):
            if int(e.min()) < 0 or int(e.max()) >= self.n:
                raise InvalidVertexError("edge vertex outside 0..n-1")
            if not (np.diff(e.astype(np.int64), axis=1) > 0).all():
                raise InvalidEdgeError("edge rows must be strictly increasing")
            if not _rows_lex_sorted(e):
                raise InvalidEdgeError("edge rows must be lex-sorted and unique")
        if self.parts is not None:
            stop = 0
            for a, b in self.parts:
                if a != stop or b < a:
                    raise InvalidVertexError("parts must tile a prefix of 0..n-1")
                stop = b
            if stop > self.n:
                raise InvalidVertexError("parts extend past n")
        e.setflags(write=False)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        n: int,
        r: int,
        edges: Iterable[Iterable[int]],
        parts: Sequence[tuple[int, int]] | None = None,
    ) -> "Hypergraph":
        rows = sorted(canonical_edge(e, n) for e in edges)
        for a, b in zip(rows, rows[1:]):
            if a == b:
                raise InvalidEdgeError(f"duplicate edge {a}")
        arr = np.array(rows, dtype=_min_dtype(max(n, 1))).reshape(len(rows), r)
        return cls(n=n, r=r, edges=arr, parts=tuple(map(tuple, parts)) if parts else None)

    @classmethod
    def from_array(
        cls,
        n: int,
        r: int,
        edges: np.ndarray,
        parts: Sequence[tuple[int, int]] | None = None,
        presorted: bool = False,
    ) -> "Hypergraph":
        arr = np.ascontiguousarray(edges, dtype=_min_dtype(max(n, 1)))
        if not presorted:
            arr, _ = _lexsort_rows(arr)
        return cls(n=n, r=r, edges=arr, parts=tuple(map(tuple, parts)) if parts else None)

    @classmethod
    def complete(cls, n: int, r: int, parts=None) -> "Hypergraph":
        rows = np.fromiter(
            (v for e in complete_edges(n, r) for v in e),
            dtype=_min_dtype(n),
            count=math.comb(n, r) * r,
        ).reshape(-1, r)
        return cls(n=n, r=r, edges=rows, parts=tuple(map(tuple, parts)) if parts else None)

    # -- accessors ---------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def iter_edges(self) -> Iterator[Edge]:
        for row in self.edges:
            yield tuple(int(v) for v in row)

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.iter_edges())

    def edge_index(self, edge: Edge) -> int:
        """Index of a canonical edge in the lex-sorted array, or -1."""
        lo, hi = 0, len(self.edges)
        target = tuple(edge)
        while lo < hi:
            mid = (lo + hi) // 2
            row = tuple(int(v) for v in self.edges[mid])
            if row < target:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.edges) and tuple(int(v) for v in self.edges[lo]) == target:
            return lo
        return -1

    def has_edge(self, edge: Edge) -> bool:
        return self.edge_index(edge) >= 0

    def part_of(self, v: int) -> int:
        if self.parts is None:
            raise PartitionLookupError("hypergraph has no parts")
        for i, (a, b) in enumerate(self.parts):
            if a <= v < b:
                return i
        raise InvalidVertexError(f"vertex {v} outside all parts")


class PartitionLookupError(LookupError):
    pass


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph with sides of size n_a and n_b; edges are (a, b) index pairs."""

    n_a: int
    n_b: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for a, b in self.edges:
            if not (0 <= a < self.n_a and 0 <= b < self.n_b):
                raise InvalidVertexError(f"pair ({a},{b}) out of range")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degrees(self) -> tuple[list[int], list[int]]:
        da = [0] * self.n_a
        db = [0] * self.n_b
        for a, b in self.edges:
            da[a] += 1
            db[b] += 1
        return da, db


@dataclass(frozen=True, eq=False)
class Coloring:
    """Total edge coloring of a host hypergraph.

    ``colors[i]`` colors ``host.edges[i]``. Color ids are expected to be
    contiguous 0..k-1 (checked by validate_coloring, not by the constructor).
    ``palette`` optionally maps each color id to its branch-path label, a
    tuple of tags recording which construction branch produced it; builders
    drop it for very large palettes.
    """

    host: Hypergraph
    colors: np.ndarray
    palette: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self):
        # totality is validate_coloring's job so broken states stay reportable
        self.colors.setflags(write=False)

    @property
    def num_colors(self) -> int:
        if self.palette is not None:
            return len(self.palette)
        if len(self.colors) == 0:
            return 0
        return int(self.colors.max()) + 1

    def color_of(self, edge: Edge) -> int:
        i = self.host.edge_index(edge)
        if i < 0:
            raise InvalidEdgeError(f"edge {edge} not in host")
        return int(self.colors[i])

    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.colors, minlength=self.num_colors)

    def class_edges(self, color: int) -> np.ndarray:
        return self.host.edges[self.colors == color]


@dataclass(frozen=True)
class Witness:
    """Concrete embedding certifying a Berge-pattern hit.

    ``core`` lists the core vertices; ``edge_map`` pairs each core pair with a
    distinct host edge containing it. For kind "cycle" the params are (g,) and
    core is the cycle order; for kind "biclique" params are (a, b) and core is
    the a-side followed by the b-side.
    """

    kind: str
    params: tuple[int, ...]
    core: tuple[int, ...]
    edge_map: tuple[tuple[tuple[int, int], Edge], ...]

    def core_pairs(self) -> list[tuple[int, int]]:
        if self.kind == "cycle":
            g = self.params[0]
            return [(self.core[i], self.core[(i + 1) % g]) for i in range(g)]
        if self.kind == "biclique":
            a, b = self.params
            left, right = self.core[:a], self.core[a:]
            return [(u, v) for u in left for v in right]
        raise ValueError(f"unknown witness kind {self.kind!r}")

    def problems(self, host_has_edge=None) -> list[str]:
        """Re-validate the witness; returns a list of violations (empty = valid)."""
        out: list[str] = []
        if self.kind == "cycle":
            if self.params[0] != len(self.core):
                out.append("core length disagrees with cycle length")
        elif self.kind == "biclique":
            if sum(self.params) != len(self.core):
                out.append("core length disagrees with biclique sides")
        if len(set(self.core)) != len(self.core):
            out.append("core vertices are not distinct")
        expected = self.core_pairs()
        got = [p for p, _ in self.edge_map]
        if [tuple(sorted(p)) for p in got] != [tuple(sorted(p)) for p in expected]:
            out.append("edge map pairs disagree with core pattern")
        used = [e for _, e in self.edge_map]
        if len(set(used)) != len(used):
            out.append("edge assignment is not injective")
        for pair, e in self.edge_map:
            if not set(pair) <= set(e):
                out.append(f"pair {pair} not contained in assigned edge {e}")
        if host_has_edge is not None:
            for _, e in self.edge_map:
                if not host_has_edge(e):
                    out.append(f"assigned edge {e} not in host")
        return out

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": list(self.params),
            "core": list(self.core),
            "edge_map": [[list(p), list(e)] for p, e in self.edge_map],
        }


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations)}


def validate_coloring(c: Coloring, max_listed: int = 20) -> ValidationReport:
    """Check totality (every host edge colored once) and palette contiguity."""
    violations: list[str] = []
    m = len(c.host.edges)
    if len(c.colors) != m:
        violations.append(f"assignment covers {len(c.colors)} of {m} edges")
    if m:
        if int(c.colors.min()) < 0:
            violations.append("negative color id")
        used = np.unique(c.colors)
        top = int(used[-1])
        if len(used) != top + 1:
            missing = np.setdiff1d(np.arange(top + 1), used)
            shown = ",".join(map(str, missing[:max_listed]))
            violations.append(f"non-contiguous palette: unused ids {shown}")
        if c.palette is not None and len(c.palette) != len(used):
            violations.append(
                f"palette has {len(c.palette)} labels but {len(used)} colors are used"
            )
    uncolored = m - len(c.colors)
    if uncolored > 0:
        violations.append(f"{uncolored} uncolored edges")
    return ValidationReport(ok=not violations, violations=tuple(violations))


# -- canonical documents ---------------------------------------------------


def _write_json_stream(fh, n, r, parts, edges, colors=None, palette=None, kind="hypergraph"):
    """Stream the canonical JSON document; identical bytes to a dict dump."""
    fh.write('{"version":%d,"kind":"%s","n":%d,"r":%d,' % (DOCUMENT_VERSION, kind, n, r))
    if parts is None:
        fh.write('"parts":null,')
    else:
        fh.write('"parts":[%s],' % ",".join("[%d,%d]" % (a, b) for a, b in parts))
    fh.write('"edges":[')
    arr = np.asarray(edges)
    total = len(arr)
    pos = 0
    while pos < total:
        block = arr[pos : pos + 8192].tolist()
        pos += len(block)
        txt = ",".join("[%s]" % ",".join(map(str, row)) for row in block)
        fh.write(txt + ("," if pos < total else ""))
    fh.write("]")
    if colors is not None:
        fh.write(',"colors":[')
        vals = colors.tolist() if isinstance(colors, np.ndarray) else list(colors)
        for i in range(0, len(vals), 65536):
            seg = vals[i : i + 65536]
            fh.write(",".join(map(str, seg)) + ("," if i + 65536 < len(vals) else ""))
        fh.write("]")
        if palette is None:
            fh.write(',"palette":null')
        else:
            fh.write(',"palette":{')
            items = []
            for cid, label in enumerate(palette):
                items.append('"%d":[%s]' % (cid, ",".join(json.dumps(t) for t in label)))
            fh.write(",".join(items))
            fh.write("}")
    fh.write("}\n")


def hypergraph_to_document(h: Hypergraph) -> dict:
    return {
        "version": DOCUMENT_VERSION,
        "kind": "hypergraph",
        "n": h.n,
        "r": h.r,
        "parts": [list(p) for p in h.parts] if h.parts is not None else None,
        "edges": h.edges.tolist(),
    }


def hypergraph_from_document(doc: dict) -> Hypergraph:
    if doc.get("kind") not in ("hypergraph", "coloring"):
        raise InvalidEdgeError(f"not a hypergraph document: kind={doc.get('kind')!r}")
    parts = doc.get("parts")
    return Hypergraph.from_edges(
        n=doc["n"],
        r=doc["r"],
        edges=doc["edges"],
        parts=[tuple(p) for p in parts] if parts else None,
    )


def coloring_to_document(c: Coloring) -> dict:
    doc = hypergraph_to_document(c.host)
    doc["kind"] = "coloring"
    doc["colors"] = c.colors.tolist()
    doc["palette"] = (
        {str(i): list(label) for i, label in enumerate(c.palette)}
        if c.palette is not None
        else None
    )
    return doc


def coloring_from_document(doc: dict) -> Coloring:
    if doc.get("kind") != "coloring":
        raise InvalidEdgeError(f"not a coloring document: kind={doc.get('kind')!r}")
    host = hypergraph_from_document(doc)
    colors = np.asarray(doc["colors"], dtype=np.int64)
    pal = doc.get("palette")
    palette = None
    if pal is not None:
        palette = tuple(tuple(pal[str(i)]) for i in range(len(pal)))
    return Coloring(host=host, colors=colors, palette=palette)


def save_hypergraph(path: str | Path, h: Hypergraph) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        _write_json_stream(fh, h.n, h.r, h.parts, h.edges, kind="hypergraph")


def save_coloring(path: str | Path, c: Coloring) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        _write_json_stream(
            fh,
            c.host.n,
            c.host.r,
            c.host.parts,
            c.host.edges,
            colors=c.colors,
            palette=c.palette,
            kind="coloring",
        )


def load_document(path: str | Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_hypergraph(path: str | Path) -> Hypergraph:
    return hypergraph_from_document(load_document(path))


def load_coloring(path: str | Path) -> Coloring:
    return coloring_from_document(load_document(path))
