import math
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergecolor.compositions import (
    WeakComposition,
    linear_extension,
    precedes,
    type_vector,
    weak_compositions,
)
from bergecolor.errors import PartitionMismatchError
from bergecolor.model import Hypergraph


def enumerate_vectors(total, slots):
    """Independent brute-force enumeration used as the counting oracle."""
    if slots == 1:
        return [(total,)]
    out = []
    for v in range(total + 1):
        out.extend((v,) + rest for rest in enumerate_vectors(total - v, slots - 1))
    return out


class TestWeakCompositions:
    def test_r2_exact_set(self):
        got = {c.entries for c in weak_compositions(2)}
        assert got == {(2, 0), (0, 2), (1, 1)}

    def test_r1(self):
        assert [c.entries for c in weak_compositions(1)] == [(1,)]

    @pytest.mark.parametrize("r", range(1, 9))
    def test_counts_match_oracle_and_binomial(self, r):
        comps = weak_compositions(r)
        entries = [c.entries for c in comps]
        assert len(entries) == len(set(entries))
        oracle = enumerate_vectors(r, r)
        assert sorted(entries) == sorted(oracle)
        assert len(comps) == math.comb(2 * r - 1, r - 1)

    def test_derived_fields(self):
        c = WeakComposition((2, 0, 1))
        assert c.max_entry == 2
        assert c.support == 2


class TestPrecedes:
    def test_grouping_example(self):
        assert precedes(WeakComposition((1, 1, 1)), WeakComposition((2, 1, 0)))

    def test_support_direction(self):
        assert not precedes(WeakComposition((2, 1, 0)), WeakComposition((1, 1, 1)))

    def test_grouping_needs_exact_sums(self):
        assert precedes(WeakComposition((1, 1, 1, 1)), WeakComposition((2, 2, 0, 0)))
        assert not precedes(
            WeakComposition((1, 1, 1, 0)), WeakComposition((2, 2, 0, 0))
        )

    @pytest.mark.parametrize("r", range(1, 6))
    def test_irreflexive_transitive_unique_minimum(self, r):
        comps = weak_compositions(r)
        rel = {
            (a.entries, b.entries)
            for a in comps
            for b in comps
            if precedes(a, b)
        }
        for a in comps:
            assert (a.entries, a.entries) not in rel
        for (a, b) in rel:
            for (b2, c) in rel:
                if b == b2:
                    assert (a, c) in rel, f"{a} < {b} < {c} but not {a} < {c}"
        ones = (1,) * r
        for other in comps:
            if other.entries != ones:
                assert (ones, other.entries) in rel
                assert (other.entries, ones) not in rel


class TestLinearExtension:
    @pytest.mark.parametrize("r", range(1, 6))
    def test_respects_order(self, r):
        order = linear_extension(r)
        pos = {c.entries: i for i, c in enumerate(order)}
        assert order[0].entries == (1,) * r
        for a in order:
            for b in order:
                if precedes(a, b):
                    assert pos[a.entries] < pos[b.entries]

    def test_chain_example(self):
        order = [c.entries for c in linear_extension(3)]
        assert order.index((1, 1, 1)) < order.index((2, 1, 0)) < order.index((3, 0, 0))

    def test_deterministic(self):
        assert linear_extension(4) == linear_extension(4)


class TestTypeVector:
    PARTS = [(0, 5), (5, 10), (10, 15)]

    def test_examples(self):
        assert type_vector((0, 5, 9), self.PARTS).entries == (1, 2, 0)
        assert type_vector((0, 5, 10), self.PARTS).entries == (1, 1, 1)
        assert type_vector((0, 1, 2), self.PARTS).entries == (3, 0, 0)

    def test_mismatch(self):
        with pytest.raises(PartitionMismatchError):
            type_vector((0, 5, 20), self.PARTS)

    @pytest.mark.parametrize("n,r", [(9, 3), (8, 4)])
    def test_layer_partition_counts(self, n, r):
        size = n // r
        parts = [(i * size, (i + 1) * size) for i in range(r)]
        host = Hypergraph.complete(n, r)
        counts = {}
        for e in host.iter_edges():
            tv = type_vector(e, parts).entries
            counts[tv] = counts.get(tv, 0) + 1
        assert sum(counts.values()) == math.comb(n, r)
        for c in weak_compositions(r):
            expected = math.prod(math.comb(size, p) for p in c.entries)
            assert counts.get(c.entries, 0) == expected


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=2, max_value=5), st.data())
def test_precedes_implies_support_drop(r, data):
    comps = weak_compositions(r)
    a = data.draw(st.sampled_from(comps))
    b = data.draw(st.sampled_from(comps))
    if precedes(a, b):
        assert a.support > b.support
        assert sum(a.entries) == sum(b.entries)
