import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergecolor.bipartite import c4free_partition
from bergecolor.detect import (
    BicliquePattern,
    CyclePattern,
    ForbiddenFamily,
    contains_berge_biclique,
    contains_berge_cycle,
    naive_berge_contains,
    verify_coloring_free,
)
from bergecolor.enlarge import EnlargementSpec, enlarge, multipartite_cover
from bergecolor.errors import OracleTooLargeError
from bergecolor.model import BipartiteGraph, Coloring, Hypergraph

K22 = BipartiteGraph(2, 2, frozenset([(0, 0), (0, 1), (1, 0), (1, 1)]))


class TestFamilyParsing:
    def test_cycles(self):
        fam = ForbiddenFamily.parse("cycle:4,cycle:5")
        assert fam.patterns == (CyclePattern(4), CyclePattern(5))

    def test_biclique_comma(self):
        fam = ForbiddenFamily.parse("biclique:2,2")
        assert fam.patterns == (BicliquePattern(2, 2),)

    def test_biclique_colon(self):
        fam = ForbiddenFamily.parse("biclique:3:2")
        assert fam.patterns == (BicliquePattern(3, 2),)

    def test_mixed(self):
        fam = ForbiddenFamily.parse("cycle:4,biclique:2,2,cycle:5")
        assert fam.patterns == (
            CyclePattern(4),
            BicliquePattern(2, 2),
            CyclePattern(5),
        )

    def test_errors(self):
        for bad in ("", "cycle:x", "blob:3", "biclique:2", "4,cycle:4"):
            with pytest.raises(ValueError):
                ForbiddenFamily.parse(bad)

    def test_derived_requirements(self):
        fam = ForbiddenFamily.cycles(2)
        assert str(fam) == "cycle:4,cycle:5"
        assert fam.required_girth() == 6
        assert fam.max_side_copies() == 4
        assert ForbiddenFamily.parse("biclique:2,2").max_side_copies() == 4


class TestCycleDetector:
    def test_plain_four_cycle(self):
        h = Hypergraph.from_edges(9, 3, [(1, 2, 5), (2, 3, 6), (3, 4, 7), (1, 4, 8)])
        w = contains_berge_cycle(h, 4)
        assert w is not None
        assert w.core == (1, 2, 3, 4)
        assert w.problems(h.has_edge) == []

    def test_too_few_edges(self):
        h = Hypergraph.from_edges(9, 3, [(1, 2, 5), (2, 3, 6), (3, 4, 7)])
        assert contains_berge_cycle(h, 4) is None

    def test_sunflower_has_no_c4(self):
        h = Hypergraph.from_edges(7, 3, [(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 2, 6)])
        assert contains_berge_cycle(h, 4) is None

    def test_degenerate_c2(self):
        h = Hypergraph.from_edges(5, 3, [(1, 2, 3), (1, 2, 4)])
        w = contains_berge_cycle(h, 2)
        assert w is not None and w.core == (1, 2)
        assert w.problems(h.has_edge) == []

    def test_triangle(self):
        h = Hypergraph.from_edges(7, 3, [(0, 1, 4), (1, 2, 5), (0, 2, 6)])
        w = contains_berge_cycle(h, 3)
        assert w is not None and w.core == (0, 1, 2)

    def test_edge_order_invariance(self):
        edges = [(1, 2, 5), (2, 3, 6), (3, 4, 7), (1, 4, 8), (0, 5, 8)]
        w1 = contains_berge_cycle(edges, 4)
        w2 = contains_berge_cycle(list(reversed(edges)), 4)
        assert w1 == w2

    def test_witness_is_lex_least(self):
        # two disjoint berge-4-cycles; the one on smaller vertices wins
        upper = [(10, 11, 20), (11, 12, 21), (12, 13, 22), (10, 13, 23)]
        lower = [(1, 2, 24), (2, 3, 25), (3, 4, 26), (1, 4, 27)]
        w = contains_berge_cycle(upper + lower, 4)
        assert w.core == (1, 2, 3, 4)


class TestBicliqueDetector:
    def test_enlarged_k22_contains_berge_k22(self):
        h = enlarge(K22, EnlargementSpec(2, 1))
        w = contains_berge_biclique(h, 2, 2)
        assert w is not None
        assert w.problems(h.has_edge) == []

    def test_c4free_enlargements_clean(self):
        for g in c4free_partition(3).classes:
            h = enlarge(g, EnlargementSpec(2, 1))
            assert contains_berge_biclique(h, 2, 2) is None

    def test_too_few_edges(self):
        h = Hypergraph.from_edges(6, 3, [(0, 1, 2), (3, 4, 5), (0, 3, 4)])
        assert contains_berge_biclique(h, 2, 2) is None

    def test_star_k1b(self):
        h = Hypergraph.from_edges(6, 3, [(0, 1, 4), (0, 2, 4), (0, 3, 5)])
        w = contains_berge_biclique(h, 1, 3)
        assert w is not None
        assert w.problems(h.has_edge) == []


class TestNaiveOracle:
    def test_single_edge_patterns(self):
        h = Hypergraph.from_edges(3, 3, [(0, 1, 2)])
        assert naive_berge_contains(h, BicliquePattern(1, 1))
        assert not naive_berge_contains(h, CyclePattern(2))

    def test_empty_host(self):
        h = Hypergraph.from_edges(3, 3, [])
        assert not naive_berge_contains(h, CyclePattern(4))

    def test_caps(self):
        h = Hypergraph.complete(7, 3)
        with pytest.raises(OracleTooLargeError):
            naive_berge_contains(h, CyclePattern(4))


def _random_host(rng):
    n = rng.randint(4, 9)
    pool = list(itertools.combinations(range(n), 3))
    m = rng.randint(1, 8)
    return Hypergraph.from_edges(n, 3, rng.sample(pool, min(m, len(pool))))


class TestOracleEquivalence:
    def test_seeded_battery(self):
        rng = random.Random(0xBE47E)
        checked = 0
        for _ in range(120):
            h = _random_host(rng)
            for g in (2, 3, 4, 5):
                fast = contains_berge_cycle(h, g)
                slow = naive_berge_contains(h, CyclePattern(g))
                assert (fast is not None) == slow, (h.edge_set(), g)
                if fast is not None:
                    assert fast.problems(h.has_edge) == []
                checked += 1
            fast = contains_berge_biclique(h, 2, 2)
            slow = naive_berge_contains(h, BicliquePattern(2, 2))
            assert (fast is not None) == slow
            checked += 1
        assert checked == 600


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_monotone_under_edge_addition(data):
    rng_seed = data.draw(st.integers(min_value=0, max_value=10**6))
    rng = random.Random(rng_seed)
    h = _random_host(rng)
    pool = [e for e in itertools.combinations(range(h.n), 3) if not h.has_edge(e)]
    if not pool:
        return
    extra = data.draw(st.sampled_from(pool))
    bigger = Hypergraph.from_edges(h.n, 3, list(h.iter_edges()) + [extra])
    for g in (2, 3, 4):
        if contains_berge_cycle(h, g) is not None:
            assert contains_berge_cycle(bigger, g) is not None


class TestVerifyColoring:
    def test_clean_build_passes(self):
        cov = multipartite_cover(c4free_partition(3), EnlargementSpec(2, 1), 9)
        fam = ForbiddenFamily.cycles(2)
        rep = verify_coloring_free(cov, fam)
        assert rep.passed
        assert rep.n_classes == 27
        assert rep.classes is not None

    def test_planted_violation_caught(self):
        cov = multipartite_cover(c4free_partition(3), EnlargementSpec(2, 1), 9)
        colors = np.array(cov.colors)
        host = cov.host
        # force the four edges of a Berge four-cycle into one class
        plant = [(0, 9, 18), (9, 1, 19), (1, 10, 20), (10, 0, 21)]
        plant = [tuple(sorted(e)) for e in plant]
        for e in plant:
            idx = host.edge_index(e)
            assert idx >= 0
            colors[idx] = 0
        bad = Coloring(host=host, colors=colors, palette=None)
        rep = verify_coloring_free(bad, ForbiddenFamily.cycles(2))
        assert not rep.passed
        failure = rep.failures[0]
        assert failure.color == 0
        assert failure.witness.problems(host.has_edge) == []

    def test_empty_coloring_passes(self):
        host = Hypergraph.from_edges(4, 3, [])
        rep = verify_coloring_free(
            Coloring(host=host, colors=np.zeros(0, dtype=np.int64), palette=()),
            ForbiddenFamily.cycles(2),
        )
        assert rep.passed
