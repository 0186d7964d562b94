import itertools
import random

import pytest

from bergecolor.bipartite import (
    BipartitePartition,
    FieldElement,
    bipartite_has_biclique,
    c4free_partition,
    import_partition,
    is_prime,
    load_partition,
    partition_to_document,
    restrict_partition,
    save_partition,
    verify_girth,
    verify_partition,
)
from bergecolor.errors import (
    InvalidPartitionError,
    NotPrimeError,
    PartitionFormatError,
)
from bergecolor.model import BipartiteGraph


def brute_force_four_cycles(g: BipartiteGraph) -> int:
    """Independent quadruple-loop scan for 4-cycles (the certification oracle)."""
    edges = g.edges
    count = 0
    for a1, a2 in itertools.combinations(range(g.n_a), 2):
        for b1, b2 in itertools.combinations(range(g.n_b), 2):
            if (
                (a1, b1) in edges
                and (a1, b2) in edges
                and (a2, b1) in edges
                and (a2, b2) in edges
            ):
                count += 1
    return count


def exhaustive_girth(g: BipartiteGraph) -> int | None:
    """DFS enumeration of all simple cycles; the girth oracle for small graphs."""
    adj = {}
    for a, b in g.edges:
        adj.setdefault(a, []).append(g.n_a + b)
        adj.setdefault(g.n_a + b, []).append(a)
    best = None

    def walk(start, current, visited):
        nonlocal best
        for nxt in adj.get(current, ()):
            if nxt == start and len(visited) >= 3:
                if best is None or len(visited) < best:
                    best = len(visited)
            elif nxt not in visited and nxt > start:
                visited.add(nxt)
                walk(start, nxt, visited)
                visited.remove(nxt)

    for s in sorted(adj):
        walk(s, s, {s})
    return best


class TestFieldElement:
    def test_arithmetic(self):
        x = FieldElement(4, 5)
        assert (x + 3).value == 2
        assert (x * 4).value == 1
        assert (x - 6).value == 3

    def test_prime_required(self):
        with pytest.raises(NotPrimeError):
            FieldElement(1, 6)

    def test_is_prime(self):
        assert [q for q in range(2, 20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]


class TestNativeConstruction:
    def test_q2_frozen_shape(self):
        p = c4free_partition(2)
        assert p.num_classes == 2
        for g in p.classes:
            assert g.edge_count == 8
            da, db = g.degrees()
            assert set(da) == {2} and set(db) == {2}

    def test_q3_classes_and_freeness(self):
        p = c4free_partition(3)
        assert [g.edge_count for g in p.classes] == [27, 27, 27]
        for g in p.classes:
            assert brute_force_four_cycles(g) == 0

    def test_q5_partitions_all_pairs(self):
        p = c4free_partition(5)
        assert p.num_classes == 5
        assert all(g.edge_count == 125 for g in p.classes)
        rep = verify_partition(p)
        assert rep.ok
        assert rep.covered_pairs == 625

    def test_not_prime(self):
        with pytest.raises(NotPrimeError):
            c4free_partition(4)

    @pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13])
    def test_regularity_and_girth_up_to_13(self, q):
        p = c4free_partition(q)
        assert p.num_classes == q
        for g in p.classes:
            da, db = g.degrees()
            assert set(da) == {q} and set(db) == {q}
            ok, _ = verify_girth(g, 6)
            assert ok
        assert verify_partition(p).ok


class TestVerifyGirth:
    def test_c6(self):
        c6 = BipartiteGraph(3, 3, frozenset([(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)]))
        assert verify_girth(c6, 6) == (True, None)
        ok, cycle = verify_girth(c6, 8)
        assert not ok
        assert len(cycle) == 6

    def test_k22(self):
        k22 = BipartiteGraph(2, 2, frozenset([(0, 0), (0, 1), (1, 0), (1, 1)]))
        ok, cycle = verify_girth(k22, 6)
        assert not ok
        assert len(cycle) == 4
        assert cycle == (0, 2, 1, 3)

    def test_forest(self):
        forest = BipartiteGraph(3, 3, frozenset([(0, 0), (1, 0), (2, 1)]))
        assert verify_girth(forest, 10**6) == (True, None)

    def test_oracle_agreement_exhaustive_3x3(self):
        pairs = list(itertools.product(range(3), range(3)))
        for bits in range(512):
            edges = frozenset(p for i, p in enumerate(pairs) if bits >> i & 1)
            g = BipartiteGraph(3, 3, edges)
            truth = exhaustive_girth(g)
            for gmin in (4, 6, 8):
                ok, cycle = verify_girth(g, gmin)
                assert ok == (truth is None or truth >= gmin)
                if not ok:
                    assert len(cycle) == truth

    def test_oracle_agreement_random_10_vertices(self):
        rng = random.Random(20240811)
        for _ in range(120):
            n_a = rng.randint(1, 5)
            n_b = rng.randint(1, 10 - n_a)
            pool = list(itertools.product(range(n_a), range(n_b)))
            edges = frozenset(rng.sample(pool, rng.randint(0, len(pool))))
            g = BipartiteGraph(n_a, n_b, edges)
            truth = exhaustive_girth(g)
            for gmin in (4, 6, 8, 10):
                ok, cycle = verify_girth(g, gmin)
                assert ok == (truth is None or truth >= gmin)
                if not ok:
                    assert len(cycle) == truth


class TestVerifyPartition:
    def test_missing_pair(self):
        p = c4free_partition(3)
        broken = BipartiteGraph(
            9, 9, frozenset(list(sorted(p.classes[0].edges))[1:])
        )
        rep = verify_partition(
            BipartitePartition(9, 9, (broken,) + p.classes[1:])
        )
        assert not rep.ok
        assert len(rep.missing) == 1

    def test_duplicated_pair(self):
        p = c4free_partition(3)
        extra = next(iter(p.classes[0].edges))
        bigger = BipartiteGraph(9, 9, p.classes[1].edges | {extra})
        rep = verify_partition(BipartitePartition(9, 9, (p.classes[0], bigger, p.classes[2])))
        assert not rep.ok
        assert extra in rep.duplicated


class TestPartitionDocuments:
    def test_round_trip(self, tmp_path):
        p = c4free_partition(3)
        f1, f2 = tmp_path / "p1.json", tmp_path / "p2.json"
        save_partition(f1, p)
        save_partition(f2, load_partition(f1))
        assert f1.read_bytes() == f2.read_bytes()

    def test_missing_pair_rejected(self):
        doc = partition_to_document(c4free_partition(3))
        doc["classes"][0] = doc["classes"][0][1:]
        with pytest.raises(InvalidPartitionError):
            import_partition(doc)

    def test_single_class_complete_graph(self):
        full = BipartiteGraph(
            2, 2, frozenset(itertools.product(range(2), range(2)))
        )
        doc = partition_to_document(BipartitePartition(2, 2, (full,)))
        p = import_partition(doc)
        assert p.num_classes == 1

    def test_malformed(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(PartitionFormatError):
            load_partition(bad)
        with pytest.raises(PartitionFormatError):
            import_partition({"kind": "something-else"})


class TestRestriction:
    def test_restriction_is_partition(self):
        p = c4free_partition(3)
        small = restrict_partition(p, 5)
        assert verify_partition(small).ok

    def test_restriction_too_large(self):
        with pytest.raises(InvalidPartitionError):
            restrict_partition(c4free_partition(3), 10)


class TestBicliqueSearch:
    def test_k22_found(self):
        k22 = BipartiteGraph(2, 2, frozenset([(0, 0), (0, 1), (1, 0), (1, 1)]))
        assert bipartite_has_biclique(k22, 2, 2) is not None

    def test_c4free_class_clean(self):
        for g in c4free_partition(3).classes:
            assert bipartite_has_biclique(g, 2, 2) is None

    def test_orientation(self):
        # 1x2 star seen from the small side only
        g = BipartiteGraph(1, 2, frozenset([(0, 0), (0, 1)]))
        assert bipartite_has_biclique(g, 1, 2) is not None
        assert bipartite_has_biclique(g, 2, 1) is not None
