"""Recursive coloring of complete uniform hosts from a multipartite base.

The complete r-uniform host splits into layers by the per-part intersection
profile of each edge. The all-ones layer goes straight to the base colorer
(the multipartite tiling). Every other layer splits each active part into
max-entry many equal subparts and classifies edges: an edge whose per-part
intersections each sit inside a single subpart recurses on the shrunken part
size and is then merged diagonally across subpart blocks (vertex-disjoint
blocks may share colors); all remaining edges land in groups keyed by the
exact set of subparts they meet, and each group recurses on its refined
profile with a fresh palette. Part sizes that do not divide evenly are padded
upward and restricted, which only drops edges and colors.

Color identities are hierarchical branch paths; equal paths in mergeable
branches are what implements the diagonal combination, and distinct branch
prefixes keep every other palette disjoint. Everything runs vectorized per
layer: an edge's color is pure arithmetic on its coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations as _combinations
from itertools import product as _product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .compositions import WeakComposition, linear_extension
from .detect import ForbiddenFamily, find_pattern
from .errors import (
    ConstructionInvalidError,
    HypothesisViolatedError,
    RaggedInputError,
)
from .model import Coloring, Edge, Hypergraph, _min_dtype


# -- base colorers -------------------------------------------------------------


class TrivialBaseColorer:
    """Every edge its own color; the degenerate base for plumbing tests."""

    def label_edges(self, size: int, coords: np.ndarray, collect: bool):
        codes = _encode_rows(coords, max(size, 1))
        uniq, inv = np.unique(codes, return_inverse=True)
        labels = None
        if collect:
            labels = [
                ("edge:" + ",".join(map(str, _decode_row(k, max(size, 1), coords.shape[1]))),)
                for k in uniq.tolist()
            ]
        return inv.astype(np.int64), len(uniq), labels

    def colors_full(self, size: int) -> int:
        return max(size, 1)


def _encode_rows(coords: np.ndarray, base: int) -> np.ndarray:
    r = coords.shape[1]
    if base**r > 2**62:
        raise ConstructionInvalidError("row encoding overflow")
    out = np.zeros(len(coords), dtype=np.int64)
    c = coords.astype(np.int64)
    for col in range(r):
        out = out * base + c[:, col]
    return out


def _decode_row(code: int, base: int, r: int) -> list[int]:
    digits = []
    for _ in range(r):
        code, d = divmod(code, base)
        digits.append(d)
    digits.reverse()
    return digits


# -- build configuration ---------------------------------------------------------


@dataclass(frozen=True)
class BuildConfig:
    """Parameters of a complete-host build.

    ``beta`` is the color-count exponent the base guarantees; it must exceed
    r - 2 for the layer recursion's constants to close. ``recursion_floor``
    (at least r; defaults to r) is the part size below which within-layer
    edges stop recursing and take fresh per-edge colors.
    """

    r: int
    n: int
    beta: float
    base: object
    recursion_floor: int | None = None
    compaction: bool = False
    collect_labels: bool | None = None

    def __post_init__(self):
        if self.r < 2:
            raise HypothesisViolatedError("uniformity must be at least 2")
        if self.beta <= self.r - 2:
            raise HypothesisViolatedError(
                f"exponent {self.beta} must exceed r-2 = {self.r - 2}"
            )
        floor = self.recursion_floor
        if floor is not None and floor < self.r:
            raise HypothesisViolatedError("recursion floor must be at least r")

    @property
    def floor(self) -> int:
        return self.recursion_floor if self.recursion_floor is not None else self.r


@dataclass
class _Ctx:
    r: int
    ones: tuple[int, ...]
    floor: int
    base: object
    collect: bool
    max_depth: int = 0


# -- subpart bookkeeping -----------------------------------------------------------


def _active_blocks(profile: Sequence[int]) -> list[tuple[int, int, int]]:
    """(part index, first column, last column+1) per active part."""
    out = []
    col = 0
    for i, p in enumerate(profile):
        if p > 0:
            out.append((i, col, col + p))
            col += p
    return out


def subpart_ranges(size: int, pieces: int) -> list[tuple[int, int]]:
    """Split 0..size-1 into `pieces` chunks of ceil(size/pieces); tails may be
    short or empty."""
    m = -(-size // pieces)
    return [(min(j * m, size), min((j + 1) * m, size)) for j in range(pieces)]


@dataclass(frozen=True)
class EdgeTypeTag:
    """Classification of one edge against a subpart split.

    kind "I": every per-part intersection sits inside a single subpart;
    kind "II": some part is split, and ``met`` lists the (part, subpart)
    slots hit while ``refined`` is the composition of intersection counts over
    those slots (padded with zeros).
    """

    kind: str
    met: tuple[tuple[int, int], ...] | None = None
    refined: WeakComposition | None = None


def classify_edge(
    edge: Edge, parts: Sequence[tuple[int, int]], pieces: int
) -> EdgeTypeTag:
    """Tag an edge of a layer host against the equal split of each part."""
    slots: list[tuple[int, int]] = []
    for v in edge:
        for i, (a, b) in enumerate(parts):
            if a <= v < b:
                m = -(-(b - a) // pieces)
                slots.append((i, (v - a) // m))
                break
        else:
            raise ValueError(f"vertex {v} outside all parts")
    per_part: dict[int, set[int]] = {}
    for i, j in slots:
        per_part.setdefault(i, set()).add(j)
    if all(len(js) == 1 for js in per_part.values()):
        return EdgeTypeTag(kind="I")
    met = sorted(set(slots))
    counts = [slots.count(s) for s in met]
    refined = WeakComposition(tuple(counts) + (0,) * (len(edge) - len(counts)))
    return EdgeTypeTag(kind="II", met=tuple(met), refined=refined)


def diagonal_combine(
    classes_by_block: Mapping[tuple[int, ...], Sequence[frozenset]],
    rho_max: int,
    support: int,
) -> list[frozenset]:
    """Merge per-block class lists along modular diagonals.

    Blocks are keyed by vectors in {1..rho_max}^support. For each offset tuple
    (k_2..k_support) and class slot t, the output is the union over i of block
    (i, i+k_2, ..., i+k_support) (entries mod rho_max, kept in 1..rho_max);
    distinct first coordinates make those blocks vertex-disjoint. Output count
    is rho_max^(support-1) * T and the union of outputs equals the union of
    inputs. Raises RaggedInputError when block lists disagree in length or the
    block grid is incomplete.
    """
    expected_keys = list(_product(range(1, rho_max + 1), repeat=support))
    t_len: int | None = None
    for key in expected_keys:
        if key not in classes_by_block:
            raise RaggedInputError(f"missing block {key}")
        cur = len(classes_by_block[key])
        if t_len is None:
            t_len = cur
        elif cur != t_len:
            raise RaggedInputError(
                f"block {key} has {cur} classes, expected {t_len}"
            )
    assert t_len is not None
    out: list[frozenset] = []
    for offsets in _product(range(rho_max), repeat=support - 1):
        for t in range(t_len):
            merged: set = set()
            for i in range(1, rho_max + 1):
                key = tuple(
                    [i] + [(i - 1 + k) % rho_max + 1 for k in offsets]
                )
                merged |= set(classes_by_block[key][t])
            out.append(frozenset(merged))
    return out


# -- the vectorized recursion ---------------------------------------------------------


def _fresh_labels(coords: np.ndarray, size: int, collect: bool):
    codes = _encode_rows(coords, max(size, 1))
    uniq, inv = np.unique(codes, return_inverse=True)
    labels = None
    if collect:
        labels = [
            ("edge:" + ",".join(map(str, _decode_row(k, max(size, 1), coords.shape[1]))),)
            for k in uniq.tolist()
        ]
    return inv.astype(np.int64), len(uniq), labels


def _label_edges(
    profile: tuple[int, ...],
    size: int,
    coords: np.ndarray,
    ctx: _Ctx,
    depth: int = 0,
):
    """Assign each coordinate row a class index; classes are branch paths.

    ``coords`` has one column per edge vertex, grouped by active part and
    ascending inside each part; entries are local positions within parts of
    the given size. Returns (index array, class count, labels or None).
    """
    ctx.max_depth = max(ctx.max_depth, depth)
    n_rows = len(coords)
    if n_rows == 0:
        return np.zeros(0, dtype=np.int64), 0, ([] if ctx.collect else None)
    if profile == ctx.ones:
        return ctx.base.label_edges(size, coords, ctx.collect)
    pmax = max(profile)
    m = -(-size // pmax)
    c = coords.astype(np.int64)
    sub = c // m
    blocks = _active_blocks(profile)
    type1 = np.ones(n_rows, dtype=bool)
    for _, a, b in blocks:
        if b - a > 1:
            type1 &= (sub[:, a:b] == sub[:, a : a + 1]).all(axis=1)
    local = c - sub * m
    out = np.empty(n_rows, dtype=np.int64)
    labels: list[tuple[str, ...]] | None = [] if ctx.collect else None
    offset = 0

    rows1 = np.flatnonzero(type1)
    if len(rows1):
        if size < max(ctx.floor, pmax):
            inv, count, sub_labels = _fresh_labels(c[rows1], size, ctx.collect)
            out[rows1] = inv
            offset = count
            if ctx.collect:
                labels.extend(sub_labels)
        else:
            jvec = np.stack([sub[rows1, a] for _, a, _ in blocks], axis=1)
            if jvec.shape[1] > 1:
                ks = (jvec[:, 1:] - jvec[:, :1]) % pmax
                kcode = np.zeros(len(rows1), dtype=np.int64)
                for col in range(ks.shape[1]):
                    kcode = kcode * pmax + ks[:, col]
            else:
                kcode = np.zeros(len(rows1), dtype=np.int64)
            cidx, ck, clabels = _label_edges(
                profile, m, local[rows1], ctx, depth + 1
            )
            key = kcode * max(ck, 1) + cidx
            ukey, inv = np.unique(key, return_inverse=True)
            out[rows1] = inv
            offset = len(ukey)
            if ctx.collect:
                width = max(jvec.shape[1] - 1, 0)
                for uk in ukey.tolist():
                    kc, t = divmod(uk, max(ck, 1))
                    digits = _decode_row(kc, pmax, width) if width else []
                    tag = "diag:" + ",".join(map(str, digits))
                    labels.append((tag,) + clabels[t])

    rows2 = np.flatnonzero(~type1)
    if len(rows2):
        parts_of_col = np.zeros(c.shape[1], dtype=np.int64)
        for i, a, b in blocks:
            parts_of_col[a:b] = i
        scode = parts_of_col[None, :] * pmax + sub[rows2]
        base_code = ctx.r * pmax
        gcode = np.zeros(len(rows2), dtype=np.int64)
        for col in range(scode.shape[1]):
            gcode = gcode * base_code + scode[:, col]
        ug, ginv = np.unique(gcode, return_inverse=True)
        group_met: list[tuple[tuple[int, int], ...]] = []
        group_tau: list[tuple[int, ...]] = []
        for code in ug.tolist():
            digits = _decode_row(code, base_code, c.shape[1])
            met: list[tuple[int, int]] = []
            counts: list[int] = []
            for d in digits:
                slot = (d // pmax, d % pmax)
                if met and met[-1] == slot:
                    counts[-1] += 1
                else:
                    met.append(slot)
                    counts.append(1)
            group_met.append(tuple(met))
            group_tau.append(tuple(counts) + (0,) * (ctx.r - len(counts)))
        by_tau: dict[tuple[int, ...], list[int]] = {}
        for gi, tau in enumerate(group_tau):
            by_tau.setdefault(tau, []).append(gi)
        tau_of_group = np.zeros(len(ug), dtype=np.int64)
        for ti, tau in enumerate(sorted(by_tau)):
            for gi in by_tau[tau]:
                tau_of_group[gi] = ti
        tau_order = sorted(by_tau)
        tau_of_row = tau_of_group[ginv]
        for ti, tau in enumerate(tau_order):
            sel = np.flatnonzero(tau_of_row == ti)
            cidx, ck, clabels = _label_edges(tau, m, local[rows2][sel], ctx, depth + 1)
            gkey = ginv[sel] * max(ck, 1) + cidx
            ukey, inv = np.unique(gkey, return_inverse=True)
            out[rows2[sel]] = offset + inv
            if ctx.collect:
                for uk in ukey.tolist():
                    gi, t = divmod(uk, max(ck, 1))
                    met = group_met[gi]
                    tag = "split:" + ";".join(
                        f"{p}.{s}:{cnt}"
                        for (p, s), cnt in zip(met, [x for x in group_tau[gi] if x])
                    )
                    labels.append((tag,) + clabels[t])
            offset += len(ukey)

    return out, offset, labels


# -- layer hosts -------------------------------------------------------------------------


def _combination_rows(size: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if size < k:
        return np.zeros((0, k), dtype=np.int64)
    rows = np.fromiter(
        (v for combo in _combinations(range(size), k) for v in combo),
        dtype=np.int64,
        count=math.comb(size, k) * k,
    )
    return rows.reshape(-1, k)


def layer_coords(sizes: Sequence[int], profile: Sequence[int]) -> np.ndarray:
    """All edges of the layer as local per-part coordinates, lex ordered."""
    blocks = [
        _combination_rows(sizes[i], p) for i, p in enumerate(profile) if p > 0
    ]
    counts = [len(b) for b in blocks]
    total = math.prod(counts) if counts else 0
    if total == 0:
        return np.zeros((0, sum(profile)), dtype=np.int64)
    reps_after = 1
    cols = []
    # index pattern: earlier blocks vary slowest, matching lex order
    for b, cnt in zip(reversed(blocks), reversed(counts)):
        idx = np.tile(np.repeat(np.arange(cnt), reps_after), total // (cnt * reps_after))
        cols.append(b[idx])
        reps_after *= cnt
    cols.reverse()
    return np.concatenate(cols, axis=1)


def color_layer(
    profile: WeakComposition | Sequence[int],
    size: int,
    base,
    recursion_floor: int | None = None,
    collect_labels: bool = True,
) -> Coloring:
    """Color one layer host: r parts of the given size, edges meeting part i in
    exactly profile[i] vertices. The all-ones profile delegates verbatim to the
    base colorer."""
    entries = tuple(profile.entries if isinstance(profile, WeakComposition) else profile)
    r = len(entries)
    if sum(entries) != r:
        raise HypothesisViolatedError("profile entries must sum to their count")
    ctx = _Ctx(
        r=r,
        ones=(1,) * r,
        floor=max(recursion_floor if recursion_floor is not None else r, r),
        base=base,
        collect=collect_labels,
    )
    coords = layer_coords([size] * r, entries)
    idx, count, labels = _label_edges(entries, size, coords, ctx)
    offsets = []
    col = 0
    for i, p in enumerate(entries):
        offsets.extend([i * size] * p)
        col += p
    edges = coords + np.array(offsets, dtype=np.int64)[None, :]
    parts = [(i * size, (i + 1) * size) for i in range(r)]
    host = Hypergraph(
        n=r * size,
        r=r,
        edges=edges.astype(_min_dtype(max(r * size, 1))),
        parts=tuple(parts),
    )
    return Coloring(
        host=host,
        colors=idx,
        palette=tuple(labels) if labels is not None else None,
    )


# -- constants ledger ------------------------------------------------------------------


@dataclass(frozen=True)
class LedgerRow:
    profile: tuple[int, ...]
    groups: int
    group_aggregate: float
    constant: float
    predicted: float
    actual: int

    def to_dict(self) -> dict:
        return {
            "profile": list(self.profile),
            "groups": self.groups,
            "group_aggregate": round(self.group_aggregate, 3),
            "constant": round(self.constant, 3),
            "predicted": round(self.predicted, 1),
            "actual": self.actual,
        }


@dataclass(frozen=True)
class ConstantLedger:
    """Reporting-only closure of the recursion's counting argument.

    For each profile, ``constant`` satisfies
    group_aggregate + constant * pmax^(support - 1 - beta) < constant,
    which is solvable because support <= r - 1 away from the all-ones profile
    and beta > r - 2. The build never consults these numbers.
    """

    beta: float
    base_constant: float
    rows: tuple[LedgerRow, ...]

    def violations(self) -> list[str]:
        out = []
        for row in self.rows:
            profile = row.profile
            pmax = max(profile)
            support = sum(1 for x in profile if x)
            if support == len(profile):
                continue
            lhs = row.group_aggregate + row.constant * pmax ** (
                support - 1 - self.beta
            )
            if not lhs < row.constant:
                out.append(f"constant inequality fails at {profile}")
        return out

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "base_constant": self.base_constant,
            "rows": [r.to_dict() for r in self.rows],
        }


def _group_shapes(profile: tuple[int, ...], r: int) -> list[tuple[tuple[int, ...], int]]:
    """Refined profiles of the split-edge groups, with multiplicities."""
    pmax = max(profile)
    per_part: list[list[tuple[int, ...]]] = []
    for p in profile:
        if p == 0:
            continue
        choices: list[tuple[int, ...]] = []
        for kk in range(1, min(p, pmax) + 1):
            for subset in _combinations(range(pmax), kk):
                for comp in _compositions_of(p, kk):
                    choices.append(comp)
        per_part.append(choices)
    counts: dict[tuple[int, ...], int] = {}
    for combo in _product(*per_part):
        if all(len(c) == 1 for c in combo):
            continue
        tau = tuple(x for c in combo for x in c)
        tau = tau + (0,) * (r - len(tau))
        counts[tau] = counts.get(tau, 0) + 1
    return sorted(counts.items())


def _compositions_of(total: int, parts: int) -> list[tuple[int, ...]]:
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(1, total - parts + 2):
        for rest in _compositions_of(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def constant_ledger(
    r: int, beta: float, base_constant: float, actual: Mapping[tuple[int, ...], int]
) -> ConstantLedger:
    order = linear_extension(r)
    constants: dict[tuple[int, ...], float] = {}
    rows = []
    for comp in order:
        profile = comp.entries
        if comp.support == r:
            constants[profile] = base_constant
            continue
        shapes = _group_shapes(profile, r)
        aggregate = sum(mult * constants[tau] for tau, mult in shapes)
        pmax = max(profile)
        shrink = pmax ** (comp.support - 1 - beta)
        constant = aggregate / (1.0 - shrink) * (1.0 + 1e-9) + 1e-9
        constants[profile] = constant
        rows.append(
            LedgerRow(
                profile=profile,
                groups=sum(m for _, m in shapes),
                group_aggregate=aggregate,
                constant=constant,
                predicted=constant,
                actual=actual.get(profile, 0),
            )
        )
    return ConstantLedger(beta=beta, base_constant=base_constant, rows=tuple(rows))


# -- full build --------------------------------------------------------------------------


@dataclass(frozen=True)
class BuildResult:
    coloring: Coloring
    per_layer: dict[str, int]
    num_colors: int
    max_depth: int
    ledger: ConstantLedger | None

    def manifest_stages(self) -> dict:
        return {
            "per_layer_colors": self.per_layer,
            "num_colors": self.num_colors,
            "max_recursion_depth": self.max_depth,
            "ledger": self.ledger.to_dict() if self.ledger else None,
        }


def build(cfg: BuildConfig) -> BuildResult:
    """Color the complete r-uniform host on n vertices, layer by layer."""
    r, n = cfg.r, cfg.n
    n0 = -(-n // r) if n >= r else 1
    parts = [(i * n0, min((i + 1) * n0, n)) for i in range(r)]
    sizes = [max(b - a, 0) for a, b in parts]
    total_edges = math.comb(n, r)
    collect = cfg.collect_labels
    if collect is None:
        collect = total_edges <= 2_000_000
    ctx = _Ctx(r=r, ones=(1,) * r, floor=max(cfg.floor, r), base=cfg.base, collect=collect)

    edge_chunks: list[np.ndarray] = []
    color_chunks: list[np.ndarray] = []
    palette: list[tuple[str, ...]] | None = [] if collect else None
    per_layer: dict[str, int] = {}
    actual: dict[tuple[int, ...], int] = {}
    offset = 0
    for comp in linear_extension(r):
        coords = layer_coords(sizes, comp.entries)
        if len(coords) == 0:
            continue
        idx, count, labels = _label_edges(comp.entries, n0, coords, ctx)
        col_offsets = []
        for i, p in enumerate(comp.entries):
            col_offsets.extend([parts[i][0]] * p)
        edges = coords + np.array(col_offsets, dtype=np.int64)[None, :]
        edge_chunks.append(edges.astype(_min_dtype(max(n, 1))))
        color_chunks.append(idx + offset)
        del coords, edges
        per_layer[str(comp)] = count
        actual[comp.entries] = count
        if collect:
            prefix = "layer:" + ",".join(map(str, comp.entries))
            palette.extend((prefix,) + lab for lab in labels)
        offset += count

    if edge_chunks:
        all_edges = np.concatenate(edge_chunks, axis=0)
        all_colors = np.concatenate(color_chunks, axis=0)
    else:
        all_edges = np.zeros((0, r), dtype=np.int64)
        all_colors = np.zeros(0, dtype=np.int64)
    if len(all_edges) != total_edges:
        raise ConstructionInvalidError(
            f"layers produced {len(all_edges)} edges, host has {total_edges}"
        )
    order = np.lexsort(tuple(all_edges[:, c] for c in range(r - 1, -1, -1)))
    all_edges = all_edges[order]
    all_colors = all_colors[order]
    host = Hypergraph(
        n=n,
        r=r,
        edges=np.ascontiguousarray(all_edges.astype(_min_dtype(max(n, 1)))),
        parts=tuple(parts),
    )
    coloring = Coloring(
        host=host,
        colors=np.ascontiguousarray(all_colors),
        palette=tuple(palette) if palette is not None else None,
    )
    ledger = None
    if hasattr(cfg.base, "colors_full") and n0 >= 1:
        base_c = cfg.base.colors_full(n0) / max(n0**cfg.beta, 1e-12)
        ledger = constant_ledger(r, cfg.beta, base_c, actual)
    return BuildResult(
        coloring=coloring,
        per_layer=per_layer,
        num_colors=offset,
        max_depth=ctx.max_depth,
        ledger=ledger,
    )


def build_coloring(cfg: BuildConfig) -> Coloring:
    return build(cfg).coloring


# -- compaction ---------------------------------------------------------------------------


def compact(
    coloring: Coloring,
    family: ForbiddenFamily | None = None,
    verify_merges: bool = False,
    max_classes: int = 50_000,
) -> Coloring:
    """Greedily merge color classes, smallest color id first.

    Vertex-disjoint unions merge without re-detection (safe for connected
    pattern families); with ``verify_merges`` and a family, vertex-sharing
    pairs also merge when the union passes every detector. Output classes are
    unions of input classes, renumbered contiguously in first-member order.

    Above ``max_classes`` the first-fit search is quadratic work for a
    constant-factor saving the large builds no longer need, so the coloring is
    returned unchanged.
    """
    colors = np.asarray(coloring.colors)
    k = coloring.num_colors
    if k == 0 or k > max_classes:
        return coloring
    host = coloring.host
    n = host.n
    words = (n + 63) // 64
    order = np.argsort(colors, kind="stable")
    sorted_colors = colors[order]
    ordered_edges = host.edges[order]
    boundaries = np.flatnonzero(np.diff(sorted_colors)) + 1
    starts = np.concatenate(([0], boundaries))
    stops = np.concatenate((boundaries, [len(colors)]))
    class_ids = sorted_colors[starts]
    masks = np.zeros((len(class_ids), words), dtype=np.uint64)
    for ci in range(len(class_ids)):
        verts = np.unique(ordered_edges[starts[ci] : stops[ci]]).astype(np.int64)
        np.bitwise_or.at(
            masks[ci], verts // 64, np.uint64(1) << (verts % 64).astype(np.uint64)
        )

    bin_masks = np.zeros((0, words), dtype=np.uint64)
    bin_members: list[list[int]] = []
    bin_edges: list[list[int]] | None = [] if verify_merges else None
    assignment = np.full(len(class_ids), -1, dtype=np.int64)
    for ci in range(len(class_ids)):
        mask = masks[ci]
        target = -1
        if len(bin_masks):
            conflict = (bin_masks & mask[None, :]).any(axis=1)
            free = np.flatnonzero(~conflict)
            if len(free):
                target = int(free[0])
            elif verify_merges and family is not None:
                rows_ci = ordered_edges[starts[ci] : stops[ci]]
                for b in np.flatnonzero(conflict):
                    merged_rows = [
                        tuple(int(v) for v in ordered_edges[ri])
                        for ri in bin_edges[int(b)]
                    ] + [tuple(int(v) for v in row) for row in rows_ci]
                    if all(
                        find_pattern(merged_rows, p) is None for p in family.patterns
                    ):
                        target = int(b)
                        break
        if target < 0:
            target = len(bin_members)
            bin_members.append([ci])
            bin_masks = np.vstack([bin_masks, mask[None, :]])
            if bin_edges is not None:
                bin_edges.append(list(range(int(starts[ci]), int(stops[ci]))))
        else:
            bin_members[target].append(ci)
            bin_masks[target] |= mask
            if bin_edges is not None:
                bin_edges[target].extend(range(int(starts[ci]), int(stops[ci])))
        assignment[ci] = target

    # map old color -> new color
    remap = np.zeros(int(class_ids.max()) + 1, dtype=np.int64)
    remap[class_ids] = assignment
    new_colors = remap[colors]
    new_palette = None
    if coloring.palette is not None:
        new_palette = []
        for members in bin_members:
            if len(members) == 1:
                new_palette.append(coloring.palette[int(class_ids[members[0]])])
            else:
                ids = "+".join(str(int(class_ids[m])) for m in members)
                new_palette.append((f"merged:{ids}",))
        new_palette = tuple(new_palette)
    return Coloring(host=host, colors=new_colors, palette=new_palette)
