import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from calibscope import ArgumentError, DimensionError, assign_equal_mass, assign_equal_width, bin_stats, equal_width_edges
from calibscope.binning import BinAssignment, EqualMass, EqualWidth, equal_mass_sizes

import oracles

confidences = st.lists(st.floats(0.0, 1.0), min_size=1, max_size=60)


class TestEqualWidth:
    def test_edges(self):
        assert equal_width_edges(5) == [0, 0.2, 0.4, 0.6, 0.8, 1.0]
        assert equal_width_edges(1) == [0, 1]
        assert equal_width_edges(10) == pytest.approx([k / 10 for k in range(11)], abs=0)

    def test_zero_bins(self):
        with pytest.raises(ArgumentError):
            equal_width_edges(0)

    @pytest.mark.parametrize("c, M, expected", [(0.7, 5, 3), (0.7, 10, 6), (0.0, 5, 0), (1.0, 5, 4), (0.3, 10, 2)])
    def test_boundaries(self, c, M, expected):
        assert assign_equal_width([c], M).bin_of[0] == expected

    def test_out_of_range(self):
        with pytest.raises(ArgumentError):
            assign_equal_width([1.2], 5)

    @given(confidences, st.integers(1, 25))
    def test_matches_oracle_partition(self, cs, M):
        assert list(assign_equal_width(cs, M).bin_of) == oracles.equal_width_bins(cs, M)


class TestEqualMass:
    def test_hand_example(self):
        a = assign_equal_mass([0.9, 0.8, 0.6, 0.55], 2)
        assert list(a.bin_of) == [1, 1, 0, 0]

    def test_single_bin(self):
        assert set(assign_equal_mass([0.3, 0.1, 0.9], 1).bin_of) == {0}

    def test_ties_split_by_index(self):
        assert list(assign_equal_mass([0.5, 0.5, 0.5], 3).bin_of) == [0, 1, 2]

    def test_ties_grouped(self):
        assert list(assign_equal_mass([0.5, 0.5, 0.5], 3, ties="group").bin_of) == [0, 0, 0]
        a = assign_equal_mass([0.1, 0.2, 0.2, 0.2, 0.9, 0.95], 3, ties="group")
        assert list(a.bin_of) == [0, 0, 0, 0, 2, 2]

    def test_too_many_bins(self):
        with pytest.raises(ArgumentError):
            assign_equal_mass([0.1, 0.2], 3)

    def test_sizes_remainder_first(self):
        assert equal_mass_sizes(10, 3) == [4, 3, 3]

    @given(confidences, st.data())
    def test_split_invariants(self, cs, data):
        M = data.draw(st.integers(1, len(cs)))
        a = assign_equal_mass(cs, M)
        counts = np.bincount(a.bin_of, minlength=M)
        assert counts.max() - counts.min() <= 1
        # concatenating bins in order recovers the sorted sequence
        order = sorted(range(len(cs)), key=lambda i: (cs[i], i))
        assert list(a.bin_of[order]) == sorted(a.bin_of)
        assert list(a.bin_of) == oracles.equal_mass_bins(cs, M, "split")

    @given(st.lists(st.sampled_from([0.1, 0.3, 0.5, 0.7, 0.9]), min_size=1, max_size=40), st.data())
    def test_group_matches_oracle(self, cs, data):
        M = data.draw(st.integers(1, len(cs)))
        assert list(assign_equal_mass(cs, M, "group").bin_of) == oracles.equal_mass_bins(cs, M, "group")

    def test_bad_tie_mode(self):
        with pytest.raises(ArgumentError):
            EqualMass(5, ties="random")


class TestBinStats:
    def test_single_level(self):
        correct = [True, True, True, False, True, True, True, False, False, True]
        [b] = bin_stats(BinAssignment(np.zeros(10, dtype=int), 1), correct, [0.7] * 10)
        assert b.acc == 0.7 and b.conf == 0.7 and b.weight == 1.0 and b.gap == 0.0

    def test_empty_bin(self):
        stats = bin_stats(BinAssignment(np.array([1, 1]), 2), [True, False], [0.6, 0.8])
        assert stats[0].count == 0 and stats[0].weight == 0
        assert stats[0].acc is None and stats[0].conf is None and stats[0].gap is None

    def test_hand_means(self):
        [b] = bin_stats(BinAssignment(np.zeros(4, dtype=int), 1), [False, True, True, True], [0.55, 0.6, 0.8, 0.9])
        assert b.acc == 0.75
        assert b.conf == pytest.approx(0.7125, abs=1e-15)
        assert (b.lower, b.upper) == (0.55, 0.9)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            bin_stats(BinAssignment(np.zeros(3, dtype=int), 1), [True], [0.5, 0.5, 0.5])

    @given(st.lists(st.tuples(st.floats(0.0, 1.0), st.booleans()), min_size=1, max_size=80), st.integers(1, 20))
    @settings(max_examples=100)
    def test_aggregate_identities(self, pairs, M):
        cs = [c for c, _ in pairs]
        ok = [k for _, k in pairs]
        stats = bin_stats(assign_equal_width(cs, M), ok, cs, equal_width_edges(M))
        assert sum(b.weight for b in stats) == pytest.approx(1.0, abs=1e-12)
        assert sum(b.weight * b.acc for b in stats if b.count) == pytest.approx(np.mean(ok), abs=1e-12)
        assert sum(b.weight * b.conf for b in stats if b.count) == pytest.approx(np.mean(cs), abs=1e-12)
        for b in stats:
            if b.count:
                members = [i for i in range(len(cs)) if b.lower < cs[i] <= b.upper or (b.lower == 0 and cs[i] == 0)]
                assert b.acc * b.count == pytest.approx(sum(ok[i] for i in members), abs=1e-9)
                assert b.conf * b.count == pytest.approx(sum(cs[i] for i in members), abs=1e-9)

    def test_permutation_invariance(self):
        r = random.Random(3)
        cs = [round(r.random(), 2) for _ in range(100)]
        ok = [r.random() < 0.5 for _ in range(100)]
        perm = list(range(100))
        r.shuffle(perm)
        for scheme_assign in (lambda c: assign_equal_width(c, 7), lambda c: assign_equal_mass(c, 7, "group")):
            before = bin_stats(scheme_assign(cs), ok, cs)
            after = bin_stats(scheme_assign([cs[i] for i in perm]), [ok[i] for i in perm], [cs[i] for i in perm])
            assert before == after
