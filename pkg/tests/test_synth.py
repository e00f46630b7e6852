import numpy as np
import pytest

from calibscope import (
    ArgumentError,
    CalibratedWorld,
    EqualMass,
    EqualWidth,
    MajorityPathology,
    distort_temperature,
    ece,
    gen_calibrated_world,
    gen_majority_pathology,
    validate_simplex,
)
from calibscope.core import Dataset, PredictionRecord, top_predictions


class TestMajorityPathology:
    def test_counts_and_vector(self):
        d = gen_majority_pathology(MajorityPathology((7, 2, 1), 0.7))
        assert len(d) == 10
        assert list(np.bincount(d.hard_labels())) == [7, 2, 1]
        assert d[0].probs[0] == 0.7
        assert d[0].probs[1] == pytest.approx(0.15, abs=1e-15)

    @pytest.mark.parametrize("M", range(1, 21))
    def test_zero_ece_equal_width(self, M):
        d = gen_majority_pathology(MajorityPathology((7, 2, 1), 0.7))
        assert ece(d, EqualWidth(M)).value == 0.0

    @pytest.mark.parametrize("M", range(1, 11))
    def test_zero_ece_equal_mass(self, M):
        d = gen_majority_pathology(MajorityPathology((7, 2, 1), 0.7))
        assert ece(d, EqualMass(M)).value == 0.0

    def test_split_ties_break_the_guarantee(self):
        d = gen_majority_pathology(MajorityPathology((7, 2, 1), 0.7))
        assert ece(d, EqualMass(10, ties="split")).value > 0

    def test_certain_single(self):
        d = gen_majority_pathology(MajorityPathology((1, 0), 1.0))
        assert d[0].probs.values == (1.0, 0.0)
        assert ece(d, EqualWidth(5)).value == 0.0

    def test_overconfident(self):
        d = gen_majority_pathology(MajorityPathology((7, 2, 1), 0.9))
        assert ece(d, EqualWidth(5)).value == pytest.approx(0.2, abs=1e-12)

    def test_strict(self):
        with pytest.raises(ArgumentError, match="unique"):
            MajorityPathology((5, 5), 0.5 + 1e-9, strict=True)
        with pytest.raises(ArgumentError, match="prevalence"):
            MajorityPathology((7, 2, 1), 0.9, strict=True)
        MajorityPathology((7, 2, 1), 0.7, strict=True)

    @pytest.mark.parametrize("counts, conf", [((7, 2, 1), 0.3), ((0, 0), 0.7), ((-1, 3), 0.7), ((3,), 1.0)])
    def test_invalid(self, counts, conf):
        with pytest.raises(ArgumentError):
            MajorityPathology(counts, conf)

    def test_remainder_split_does_not_matter(self):
        d = gen_majority_pathology(MajorityPathology((6, 3, 1), 0.6))
        uneven = Dataset(
            [PredictionRecord(r.id, validate_simplex([0.6, 0.35, 0.05]), hard_label=r.hard_label) for r in d]
        )
        for scheme in (EqualWidth(10), EqualMass(3)):
            assert ece(d, scheme).value == ece(uneven, scheme).value


class TestCalibratedWorld:
    def test_n_zero(self):
        with pytest.raises(ArgumentError):
            CalibratedWorld(0, 3, 1)

    def test_deterministic(self):
        a = gen_calibrated_world(CalibratedWorld(200, 3, 42))
        b = gen_calibrated_world(CalibratedWorld(200, 3, 42))
        assert a == b
        assert a != gen_calibrated_world(CalibratedWorld(200, 3, 43))

    def test_pinned_first_record(self):
        # guards the documented PCG64 + Dirichlet stream against silent changes
        d = gen_calibrated_world(CalibratedWorld(3, 3, 12345))
        assert d[0].probs.values == pytest.approx(
            np.random.Generator(np.random.PCG64(12345)).dirichlet(np.ones(3), size=3)[0].tolist(), abs=1e-15
        )

    def test_labels_follow_probs(self):
        d = gen_calibrated_world(CalibratedWorld(20000, 2, 5))
        p = d.probs[:, 1]
        y = d.hard_labels()
        assert abs(y.mean() - p.mean()) < 0.02


class TestTemperature:
    def test_identity(self):
        d = gen_calibrated_world(CalibratedWorld(50, 4, 1))
        np.testing.assert_allclose(distort_temperature(d, 1.0).probs, d.probs, atol=1e-12)

    @pytest.mark.parametrize("T", [0.2, 0.5, 2.0, 7.0])
    def test_symmetric_fixed_point(self, T):
        d = Dataset([PredictionRecord("a", validate_simplex([0.5, 0.5]), hard_label=0)])
        assert distort_temperature(d, T)[0].probs.values == (0.5, 0.5)

    def test_invalid(self):
        d = Dataset([PredictionRecord("a", validate_simplex([0.5, 0.5]), hard_label=0)])
        with pytest.raises(ArgumentError):
            distort_temperature(d, 0.0)

    @pytest.mark.parametrize("T", [0.3, 0.5, 1.5, 3.0])
    def test_preserves_accuracy(self, T):
        d = gen_calibrated_world(CalibratedWorld(2000, 4, 9))
        _, before = top_predictions(d)
        _, after = top_predictions(distort_temperature(d, T))
        assert (before == after).all()

    def test_sharpening_raises_ece(self):
        d = gen_calibrated_world(CalibratedWorld(5000, 3, 2))
        assert ece(distort_temperature(d, 0.5), EqualWidth(15)).value > ece(d, EqualWidth(15)).value

    def test_direction(self):
        d = gen_calibrated_world(CalibratedWorld(500, 3, 3))
        conf = d.probs.max(axis=1)
        assert (distort_temperature(d, 0.5).probs.max(axis=1) >= conf - 1e-12).all()
        assert (distort_temperature(d, 2.0).probs.max(axis=1) <= conf + 1e-12).all()
