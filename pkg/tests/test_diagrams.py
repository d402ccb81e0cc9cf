import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blochpt.diagrams import (
    BlochSequence,
    CapExceeded,
    CrossingNumbers,
    InvalidCrossingNumbers,
    canonical_diagram,
    count_convex,
    count_sequences,
    crossing_numbers,
    enumerate_sequences,
    is_convex,
    iter_sequences,
    z_decompose,
)

small_sequences = st.integers(1, 6).flatmap(
    lambda n: st.sampled_from(enumerate_sequences(n))
)


def diagonal_intersections(parts):
    """Independent path walker: diagonal meetings where the path switches side.

    Samples (height - position) along the staircase polyline, inserting the
    piercing point when a rise crosses the diagonal strictly inside a
    segment; a zero sample flanked by opposite signs is one intersection.
    The start and end points sit on the diagonal but have no side
    before/after, so they never count.
    """
    values = [0]
    prev = 0
    for i, k in enumerate(parts, start=1):
        cur = prev + k
        if k:
            if prev < i - 1 < cur:
                values.append(0)
            values.append(cur - (i - 1))
        values.append(cur - i)
        prev = cur
    crossings = 0
    for j in range(1, len(values) - 1):
        if values[j] == 0 and values[j - 1] * values[j + 1] < 0:
            crossings += 1
    return crossings


class TestBlochSequence:
    def test_validation(self):
        with pytest.raises(ValueError):
            BlochSequence(())
        with pytest.raises(ValueError):
            BlochSequence((2,))
        with pytest.raises(ValueError):
            BlochSequence((-1, 3))
        assert BlochSequence((2, 0)).order == 2

    def test_partial_sums(self):
        assert BlochSequence((2, 0, 0, 2)).partial_sums() == (2, 2, 2, 4)

    def test_parse(self):
        assert BlochSequence.parse("2, 0, 0, 2").parts == (2, 0, 0, 2)


class TestEnumeration:
    def test_order_one(self):
        assert [s.parts for s in enumerate_sequences(1)] == [(1,)]

    def test_order_two(self):
        assert [s.parts for s in enumerate_sequences(2)] == [(0, 2), (1, 1), (2, 0)]

    def test_counts_match_closed_forms(self):
        for n in range(1, 9):
            seqs = enumerate_sequences(n)
            assert len(seqs) == count_sequences(n)
            assert sum(is_convex(s) for s in seqs) == count_convex(n)

    def test_lexicographic_and_unique(self):
        seqs = [s.parts for s in enumerate_sequences(5)]
        assert seqs == sorted(set(seqs))

    def test_cap(self):
        with pytest.raises(CapExceeded):
            enumerate_sequences(5, cap=4)

    def test_cap_env(self, monkeypatch):
        monkeypatch.setenv("BLOCH_RSPT_CAP", "3")
        with pytest.raises(CapExceeded):
            list(iter_sequences(4))
        assert len(enumerate_sequences(3)) == 10

    def test_count_values(self):
        assert [count_sequences(n) for n in (1, 2, 3, 4)] == [1, 3, 10, 35]
        assert [count_convex(n) for n in (1, 2, 3, 4)] == [1, 2, 5, 14]


class TestConvexity:
    def test_trivial(self):
        assert is_convex((1,))

    def test_non_convex(self):
        assert not is_convex((0, 2))

    def test_final_index_unconstrained(self):
        # only proper prefixes matter; every sequence ends at K_n == n
        assert is_convex((2, 0))
        assert is_convex((1, 1, 1))


class TestCrossingNumbers:
    def test_known_diagrams(self):
        assert crossing_numbers((2, 0, 0, 2, 0, 2, 0, 3, 0)).flat == (1, 3, 1, 0)
        assert crossing_numbers((0, 2, 0, 2, 0, 2, 0, 2)).flat == (0, 4)

    def test_diagonal_hugging(self):
        cn = crossing_numbers((1, 1, 1))
        assert cn.pairs == ((0, 0),)
        assert cn.m == 1

    def test_touch_without_cross(self):
        # path dips to the diagonal at (2,2) but never below it
        assert crossing_numbers((2, 0, 1, 1)).flat == (1, 0)

    def test_shape_validation(self):
        with pytest.raises(InvalidCrossingNumbers):
            CrossingNumbers(((1, 0), (0, 2)))  # zero interior entry
        with pytest.raises(InvalidCrossingNumbers):
            CrossingNumbers.from_flat((1, 2, 3))
        with pytest.raises(InvalidCrossingNumbers):
            CrossingNumbers(((-1, 0),))
        assert CrossingNumbers.from_flat((0, 0)).pairs == ((0, 0),)

    @settings(max_examples=200)
    @given(small_sequences)
    def test_convex_iff_single_rising_pair(self, seq):
        cn = crossing_numbers(seq)
        assert is_convex(seq) == (cn.m == 1 and cn.lower == (0,))

    def test_intersection_count_invariant(self):
        for n in range(1, 9):
            for seq in iter_sequences(n):
                x = diagonal_intersections(seq.parts)
                assert math.ceil(x / 2) == sum(crossing_numbers(seq).lower), seq


class TestCanonicalDiagram:
    def test_known_values(self):
        assert canonical_diagram((1, 3, 1, 0)).parts == (2, 0, 0, 2, 0, 2, 0, 3, 0)
        assert canonical_diagram((0, 0)).parts == (1,)
        assert canonical_diagram((0, 2)).parts == (0, 2, 0, 2)

    def test_rejects_interior_zero(self):
        with pytest.raises(InvalidCrossingNumbers):
            canonical_diagram((1, 0, 0, 1))

    def _valid_crossing_lists(self, max_entry=3):
        yield (0, 0)
        for m in range(1, 4):
            def rec(pairs, i):
                if i == m:
                    yield tuple(pairs)
                    return
                first = range(0, max_entry + 1) if i == 0 else range(1, max_entry + 1)
                for up in first:
                    last = range(0, max_entry + 1) if i == m - 1 else range(1, max_entry + 1)
                    for down in last:
                        yield from rec(pairs + [(up, down)], i + 1)
            for pairs in rec([], 0):
                if pairs != ((0, 0),) * m:
                    try:
                        CrossingNumbers(pairs)
                    except InvalidCrossingNumbers:
                        continue
                    yield tuple(x for p in pairs for x in p)

    def test_round_trip(self):
        seen = 0
        for flat in self._valid_crossing_lists():
            diagram = canonical_diagram(flat)
            if diagram.order > 10:
                continue
            seen += 1
            recovered = crossing_numbers(diagram)
            assert recovered.flat == flat, (flat, diagram)
            assert canonical_diagram(recovered) == diagram
        assert seen > 50


class TestZDecomposition:
    def test_example_with_empty_string(self):
        z = z_decompose((1, 3, 0, 0, 1))
        assert z.strings == ((1, 3), (), (1,))
        assert z.q == 3

    def test_no_zeros(self):
        assert z_decompose((1, 1, 1)).strings == ((1, 1, 1),)

    def test_leading_zero(self):
        assert z_decompose((0, 2)).strings == ((), (2,))

    @settings(max_examples=200)
    @given(small_sequences)
    def test_round_trip(self, seq):
        z = z_decompose(seq)
        assert z.reassemble() == seq
        assert z.q - 1 == sum(1 for k in seq.parts if k == 0)
