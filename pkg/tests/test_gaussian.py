import json
import math

import numpy as np
import pytest

from eprlab import (
    GaussianState,
    MomentMatrix,
    ValidationError,
    extract_moments,
    tmsv,
    uncertainty_check,
)
from conftest import two_mode_squeeze_cov


class TestTmsv:
    def test_zero_squeezing_is_vacuum(self):
        assert np.array_equal(tmsv(0.0).cov, 0.5 * np.eye(4))

    @pytest.mark.parametrize("r", [-2.5, -1.0, -0.2, 0.3, 1.0, 2.7])
    def test_matches_symplectic_oracle(self, r):
        assert np.max(np.abs(tmsv(r).cov - two_mode_squeeze_cov(r))) < 1e-12

    def test_position_cross_moment_at_r1(self):
        assert abs(tmsv(1.0).cov[0, 2] - math.sinh(2.0) / 2.0) < 1e-15

    def test_no_position_momentum_cross_term(self):
        assert tmsv(1.0).cov[0, 3] == 0.0

    def test_zero_mean(self):
        assert np.array_equal(tmsv(1.3).mean, np.zeros(4))

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            tmsv(math.inf)


class TestExtractMoments:
    def test_vacuum_has_no_cross_correlation(self):
        m = extract_moments(tmsv(0.0))
        assert (m.qq, m.pq, m.qp, m.pp) == (0.0, 0.0, 0.0, 0.0)

    def test_tmsv_r1(self):
        m = extract_moments(tmsv(1.0))
        s = math.sinh(2.0) / 2.0
        assert abs(m.qq - s) < 1e-12
        assert m.pq == 0.0 and m.qp == 0.0
        assert abs(m.pp + s) < 1e-12

    def test_direct_read_off_of_cross_block(self):
        # rows (q1, p1), columns (q2, p2): [[qq, qp], [pq, pp]]
        cov = np.array([
            [9.0, 0.0, 2.0, 3.0],
            [0.0, 9.0, 5.0, 7.0],
            [2.0, 5.0, 9.0, 0.0],
            [3.0, 7.0, 0.0, 9.0],
        ])
        m = extract_moments(GaussianState(cov=cov))
        assert (m.qq, m.qp, m.pq, m.pp) == (2.0, 3.0, 5.0, 7.0)

    def test_mean_contributes_raw_moments(self):
        state = GaussianState(cov=0.5 * np.eye(4), mean=[1.0, 2.0, 3.0, 4.0])
        m = extract_moments(state)
        assert (m.qq, m.pq, m.qp, m.pp) == (3.0, 6.0, 4.0, 8.0)

    def test_antisymmetry_of_tmsv_moments(self):
        for r in np.linspace(-3.0, 3.0, 13):
            m = extract_moments(tmsv(float(r)))
            assert abs(m.qq + m.pp) < 1e-12
            assert m.pq == 0.0 and m.qp == 0.0

    def test_linear_in_covariance_for_zero_mean(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            c1 = rng.standard_normal((4, 4))
            c1 = c1 + c1.T
            c2 = rng.standard_normal((4, 4))
            c2 = c2 + c2.T
            lam, mu = rng.standard_normal(2)
            combined = extract_moments(GaussianState(cov=lam * c1 + mu * c2))
            m1 = extract_moments(GaussianState(cov=c1))
            m2 = extract_moments(GaussianState(cov=c2))
            for name in ("qq", "pq", "qp", "pp"):
                expected = lam * getattr(m1, name) + mu * getattr(m2, name)
                assert abs(getattr(combined, name) - expected) < 1e-12


class TestUncertaintyCheck:
    def test_vacuum_passes(self):
        report = uncertainty_check(GaussianState(cov=0.5 * np.eye(4)))
        assert report.physical
        assert report.min_eigenvalue > -1e-9

    def test_squeezed_state_passes(self):
        assert uncertainty_check(tmsv(2.0)).physical

    def test_zero_covariance_fails(self):
        report = uncertainty_check(GaussianState(cov=np.zeros((4, 4))))
        assert not report.physical
        assert abs(report.min_eigenvalue + 0.5) < 1e-12

    @pytest.mark.parametrize("r", np.linspace(-3.0, 3.0, 13))
    def test_whole_squeezing_range_physical(self, r):
        assert uncertainty_check(tmsv(float(r))).physical


class TestGaussianStateValidation:
    def test_rejects_asymmetric_covariance(self):
        cov = 0.5 * np.eye(4)
        cov[0, 1] = 1e-6
        with pytest.raises(ValidationError):
            GaussianState(cov=cov)

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValidationError):
            GaussianState(cov=np.eye(2))

    def test_rejects_non_finite_mean(self):
        with pytest.raises(ValidationError):
            GaussianState(cov=0.5 * np.eye(4), mean=[0.0, 0.0, math.nan, 0.0])

    def test_covariance_is_readonly(self):
        state = tmsv(0.5)
        with pytest.raises(ValueError):
            state.cov[0, 0] = 1.0


class TestMomentMatrix:
    def test_as_matrix_layout(self):
        m = MomentMatrix(qq=1.0, pq=2.0, qp=3.0, pp=4.0)
        assert np.array_equal(m.as_matrix(), [[1.0, 3.0], [2.0, 4.0]])

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            MomentMatrix(qq=math.inf, pq=0.0, qp=0.0, pp=0.0)


class TestSerialization:
    def test_round_trip(self):
        state = tmsv(0.8)
        clone = GaussianState.from_json(state.to_json())
        assert np.array_equal(clone.cov, state.cov)
        assert np.array_equal(clone.mean, state.mean)

    def test_schema_keys(self):
        data = json.loads(tmsv(0.0).to_json())
        assert set(data) == {"cov", "mean"}
        assert len(data["cov"]) == 4 and len(data["cov"][0]) == 4
        assert len(data["mean"]) == 4

    def test_bad_payload(self):
        with pytest.raises(ValidationError):
            GaussianState.from_dict({"cov": [[1.0]]})
