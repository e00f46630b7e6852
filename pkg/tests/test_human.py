import math

import pytest
from hypothesis import given, settings, strategies as st

from calibscope import (
    ArgumentError,
    Dataset,
    MissingSoftLabelError,
    PredictionRecord,
    distce,
    entce,
    human_report,
    rankcs,
    validate_simplex,
    votes_to_distribution,
)
from calibscope.human import majority_vote, rank_order


def rec(probs, soft, rid="s"):
    return PredictionRecord(rid, validate_simplex(probs), soft_label=validate_simplex(soft))


class TestVotes:
    def test_frequencies(self):
        assert votes_to_distribution([0, 0, 1], 3).values == pytest.approx((2 / 3, 1 / 3, 0.0), abs=1e-15)

    def test_unanimous(self):
        assert votes_to_distribution([2, 2, 2, 2], 3).values == (0.0, 0.0, 1.0)

    def test_uniform(self):
        assert votes_to_distribution([0, 1, 2], 3).values == pytest.approx((1 / 3,) * 3, abs=1e-15)

    def test_vote_out_of_range(self):
        with pytest.raises(ArgumentError):
            votes_to_distribution([0, 3], 3)

    @given(st.integers(2, 6).flatmap(lambda K: st.tuples(st.just(K), st.lists(st.integers(0, K - 1), min_size=1, max_size=30))))
    def test_multiples_of_one_over_a(self, case):
        K, votes = case
        p = votes_to_distribution(votes, K)
        assert math.fsum(p) == pytest.approx(1.0, abs=1e-12)
        for v in p:
            assert v * len(votes) == pytest.approx(round(v * len(votes)), abs=1e-9)

    def test_majority_tie_lowest(self):
        assert majority_vote([2, 1, 1, 2], 3) == 1


class TestPerSample:
    def test_entce_identical(self):
        assert entce(rec([0.2, 0.3, 0.5], [0.2, 0.3, 0.5])) == 0.0

    def test_entce_one_hot_vs_uniform(self):
        assert entce(rec([1 / 3] * 3, [0, 0, 1])) == pytest.approx(-math.log(3), abs=1e-12)

    def test_entce_permutation(self):
        assert entce(rec([0.1, 0.2, 0.7], [0.7, 0.1, 0.2])) == pytest.approx(0.0, abs=1e-15)

    def test_entce_needs_soft(self):
        with pytest.raises(MissingSoftLabelError):
            entce(PredictionRecord("a", validate_simplex([0.5, 0.5]), hard_label=0))

    def test_distce_values(self):
        assert distce(rec([0.2, 0.8], [0.2, 0.8])) == 0.0
        assert distce(rec([0.1, 0.2, 0.7], [0.7, 0.2, 0.1])) == pytest.approx(0.6, abs=1e-12)
        assert distce(rec([0, 1, 0], [1, 0, 0])) == 1.0

    def test_rank_order_ties(self):
        assert rank_order([0.5, 0.25, 0.25]) == (1, 2, 0)


class TestDatasetMeasures:
    def test_rankcs_perfect(self):
        d = Dataset([rec([0.2, 0.8], [0.2, 0.8], "a"), rec([0.6, 0.4], [0.6, 0.4], "b")])
        assert rankcs(d) == 1.0

    def test_rankcs_reversed(self):
        assert rankcs(Dataset([rec([0.1, 0.2, 0.7], [0.7, 0.2, 0.1])])) == 0.0

    def test_rankcs_sharpened(self):
        soft = [[0.5, 0.3, 0.2], [0.1, 0.6, 0.3], [0.25, 0.35, 0.4]]
        recs = []
        for i, y in enumerate(soft):
            sharp = [v**3 for v in y]
            recs.append(rec([v / sum(sharp) for v in sharp], y, f"s{i}"))
        assert rankcs(Dataset(recs)) == 1.0

    def test_report_perfect(self):
        d = Dataset([rec([0.2, 0.8], [0.2, 0.8], "a"), rec([0.6, 0.4], [0.6, 0.4], "b")])
        h = human_report(d)
        assert (h.mean_abs_entce, h.mean_abs_distce, h.rankcs) == (0.0, 0.0, 1.0)

    def test_report_hand_mean(self):
        d = Dataset([rec([0.1, 0.2, 0.7], [0.7, 0.2, 0.1], "a"), rec([0.3, 0.7, 0.0], [0.3, 0.7, 0.0], "b")])
        assert human_report(d).mean_abs_distce == pytest.approx(0.3, abs=1e-12)

    def test_report_single(self):
        r = rec([0.1, 0.9], [0.4, 0.6])
        h = human_report(Dataset([r]))
        assert h.mean_abs_entce == abs(entce(r))
        assert h.mean_abs_distce == distce(r)
        assert h.rankcs == 1.0

    def test_report_lists_missing_ids(self):
        d = Dataset([rec([0.5, 0.5], [0.5, 0.5], "ok"),
                     PredictionRecord("nolabel", validate_simplex([0.5, 0.5]), hard_label=1)])
        with pytest.raises(MissingSoftLabelError, match="nolabel"):
            human_report(d)

    def test_ties_flagged(self):
        h = human_report(Dataset([rec([0.5, 0.5], [0.3, 0.7], "t"), rec([0.2, 0.8], [0.3, 0.7], "u")]))
        assert [s.ties for s in h.per_sample] == [True, False]

    def test_aggregates_recompute(self, rng):
        recs = []
        for i in range(50):
            p = [rng.random() for _ in range(4)]
            y = [rng.random() for _ in range(4)]
            recs.append(rec([v / sum(p) for v in p], [v / sum(y) for v in y], f"s{i}"))
        h = human_report(Dataset(recs))
        assert h.mean_abs_entce == pytest.approx(sum(abs(entce(r)) for r in recs) / 50, abs=1e-12)
        assert h.mean_abs_distce == pytest.approx(sum(distce(r) for r in recs) / 50, abs=1e-12)
        assert h.rankcs == sum(s.rank_match for s in h.per_sample) / 50
