import itertools

import numpy as np
import pytest

from bergecolor.bipartite import BipartitePartition, c4free_partition
from bergecolor.enlarge import (
    CoverBaseColorer,
    EnlargementSpec,
    ShiftVector,
    enlarge,
    enlargement_isomorphic_relabel,
    multipartite_cover,
    shifted_copy,
)
from bergecolor.errors import SizeMismatchError, UnverifiedPartitionError
from bergecolor.model import BipartiteGraph, validate_coloring

K22 = BipartiteGraph(2, 2, frozenset([(0, 0), (0, 1), (1, 0), (1, 1)]))
C6 = BipartiteGraph(3, 3, frozenset([(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)]))


class TestEnlarge:
    def test_single_edge(self):
        g = BipartiteGraph(1, 1, frozenset([(0, 0)]))
        h = enlarge(g, EnlargementSpec(2, 1))
        assert h.n == 3 and h.r == 3 and h.edge_count == 1

    def test_identity_when_no_copies(self):
        h = enlarge(K22, EnlargementSpec(1, 1))
        assert h.edge_count == K22.edge_count
        assert h.edge_set() == {(a, 2 + b) for a, b in K22.edges}

    def test_c6_counts(self):
        h = enlarge(C6, EnlargementSpec(1, 2))
        assert h.n == 9 and h.r == 3 and h.edge_count == 6

    def test_copies_contiguous(self):
        h = enlarge(K22, EnlargementSpec(2, 1))
        assert h.edge_set() == {(0, 1, 4), (0, 1, 5), (2, 3, 4), (2, 3, 5)}


class TestShiftedCopy:
    def test_requires_square(self):
        g = BipartiteGraph(2, 3, frozenset([(0, 0)]))
        with pytest.raises(SizeMismatchError):
            shifted_copy(g, EnlargementSpec(1, 1), ShiftVector((), ()), 2)

    def test_k22_shift_example(self):
        h = shifted_copy(K22, EnlargementSpec(2, 1), ShiftVector((1,), ()), 2)
        assert h.edge_count == 4
        # coordinates: (u, u+1 mod 2, v) in parts of size 2
        expected = {
            (u, 2 + (u + 1) % 2, 4 + v) for u, v in K22.edges
        }
        assert h.edge_set() == expected

    def test_zero_shift_matches_enlargement(self):
        spec = EnlargementSpec(2, 1)
        for g in (K22, C6):
            n = g.n_a
            zero = shifted_copy(g, spec, ShiftVector((0,), ()), n)
            relabel = enlargement_isomorphic_relabel(g, spec)
            mapped = {
                tuple(sorted(relabel[v] for v in e))
                for e in enlarge(g, spec).iter_edges()
            }
            assert mapped == zero.edge_set()

    def test_translation_isomorphism(self):
        spec = EnlargementSpec(2, 2)
        n = 3
        shifts = ShiftVector((2,), (1,))
        moved = shifted_copy(C6, spec, shifts, n)
        zero = shifted_copy(C6, spec, ShiftVector((0,), (0,)), n)

        def translate(v):
            part, coord = divmod(v, n)
            delta = {0: 0, 1: 2, 2: 0, 3: 1}[part]
            return part * n + (coord + delta) % n

        mapped = {tuple(sorted(translate(v) for v in e)) for e in zero.iter_edges()}
        assert mapped == moved.edge_set()

    def test_distinct_shifts_edge_disjoint(self):
        spec = EnlargementSpec(2, 1)
        n = 3
        seen = set()
        for a2 in range(n):
            h = shifted_copy(C6, spec, ShiftVector((a2,), ()), n)
            edges = h.edge_set()
            assert not (seen & edges)
            seen |= edges


class TestMultipartiteCover:
    def test_single_class_k22(self):
        p = BipartitePartition(2, 2, (K22,))
        cov = multipartite_cover(p, EnlargementSpec(2, 1), 2)
        assert cov.num_colors == 2
        sizes = cov.class_sizes()
        assert sizes.tolist() == [4, 4]
        assert cov.host.edge_count == 8
        assert validate_coloring(cov).ok

    def test_q3_exact_counts(self):
        p = c4free_partition(3)
        cov = multipartite_cover(p, EnlargementSpec(2, 1), 9)
        assert cov.num_colors == 3 * 9
        assert cov.class_sizes().sum() == 729
        assert validate_coloring(cov).ok

    def test_identity_spec_reproduces_partition(self):
        p = c4free_partition(3)
        cov = multipartite_cover(p, EnlargementSpec(1, 1), 9)
        assert cov.num_colors == p.num_classes
        for i, g in enumerate(p.classes):
            rows = cov.class_edges(i)
            got = {(int(a), int(b) - 9) for a, b in rows}
            assert got == set(g.edges)

    def test_classes_are_shifted_copies(self):
        p = c4free_partition(3)
        spec = EnlargementSpec(2, 1)
        cov = multipartite_cover(p, spec, 9)
        # color (i, a2) holds exactly the shifted copy of class i
        for color in (0, 5, 13, 26):
            i, a2 = divmod(color, 9)
            expect = shifted_copy(p.classes[i], spec, ShiftVector((a2,), ()), 9)
            rows = cov.class_edges(color)
            got = {tuple(int(v) for v in row) for row in rows}
            assert got == expect.edge_set()

    def test_unverified_rejected(self):
        missing = BipartiteGraph(2, 2, frozenset([(0, 0), (1, 1)]))
        p = BipartitePartition(2, 2, (missing,))
        with pytest.raises(UnverifiedPartitionError):
            multipartite_cover(p, EnlargementSpec(1, 1), 2)

    def test_cover_mode_tie_break(self):
        dup_a = BipartiteGraph(2, 2, frozenset([(0, 0), (0, 1), (1, 0), (1, 1)]))
        dup_b = BipartiteGraph(2, 2, frozenset([(0, 0)]))
        p = BipartitePartition(2, 2, (dup_a, dup_b))
        with pytest.raises(UnverifiedPartitionError):
            multipartite_cover(p, EnlargementSpec(1, 1), 2)
        cov = multipartite_cover(p, EnlargementSpec(1, 1), 2, allow_cover=True)
        # duplicated pair resolves to the smaller class index
        assert cov.num_colors == 2 or cov.num_colors == 1


class TestCoverBaseColorer:
    def test_restriction_labels_match_full_table(self):
        p = c4free_partition(3)
        base = CoverBaseColorer(p, EnlargementSpec(2, 1))
        coords = np.array(list(itertools.product(range(5), repeat=3)))
        idx, count, labels = base.label_edges(5, coords, collect=True)
        assert count == len(labels) == len(set(labels))
        # same coordinates always get the same label
        idx2, count2, _ = base.label_edges(5, coords, collect=False)
        assert count2 == count
        assert (idx == idx2).all()
