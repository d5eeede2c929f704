import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import refimpl
from ionet import (
    DataError,
    DimensionMismatchError,
    DomainError,
    EmploymentMultiplier,
    FlowMatrix,
    NonProductiveError,
    OutputMultiplier,
    apply_rpc,
    employment_multiplier,
    leontief_inverse,
    output_multiplier,
    regional_inputs,
)

TWO_SECTOR = np.array([[0.0, 0.0], [0.5, 0.0]])


def productive(n, seed, radius=0.8):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.01, 1.0, size=(n, n))
    return a * (radius / np.abs(np.linalg.eigvals(a)).max())


class TestLeontiefInverse:
    def test_hand_inverse(self):
        lmat = leontief_inverse(TWO_SECTOR)
        assert np.allclose(lmat, [[1.0, 0.0], [0.5, 1.0]], rtol=0, atol=1e-12)

    def test_matches_requirement_series(self):
        a = productive(6, 0)
        lmat = leontief_inverse(a)
        series = refimpl.requirements_series(a)
        assert np.allclose(lmat, series, rtol=1e-10, atol=1e-12)

    def test_requirements_never_negative(self):
        lmat = leontief_inverse(productive(8, 4))
        assert (lmat >= 0.0).all()

    @pytest.mark.parametrize(
        "a",
        [
            np.eye(2),
            np.array([[0.0, 1.0], [1.0, 0.0]]),
            np.array([[0.6, 0.6], [0.6, 0.6]]),
        ],
    )
    def test_divergent_requirements_rejected(self, a):
        with pytest.raises(NonProductiveError, match="spectral radius"):
            leontief_inverse(a)

    def test_residual_gate_rejects_rounding_noise_at_tol_zero(self):
        with pytest.raises(NonProductiveError, match="residual"):
            leontief_inverse(productive(8, 1), tol=0.0)

    def test_accepts_flow_matrix(self):
        a = productive(4, 2)
        assert (leontief_inverse(FlowMatrix(a)) == leontief_inverse(a)).all()


class TestOutputMultiplier:
    def test_hand_value(self):
        cv = output_multiplier(TWO_SECTOR)
        assert np.allclose(cv.scores, [1.5, 1.0], rtol=0, atol=1e-12)
        assert cv.measure == "outmult"
        assert not cv.undefined.any()

    def test_column_sums_of_requirements(self):
        a = productive(5, 3)
        cv = output_multiplier(a)
        assert (cv.scores == leontief_inverse(a).sum(axis=0)).all()

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**31), n=st.integers(2, 7))
    def test_at_least_one(self, seed, n):
        # requirements include the unit of own activity, so no multiplier
        # can fall below 1
        cv = output_multiplier(productive(n, seed))
        assert (cv.scores >= 1.0 - 1e-12).all()


class TestEmploymentMultiplier:
    def test_hand_value(self):
        cv = employment_multiplier(TWO_SECTOR, [2.0, 1.0])
        assert np.allclose(cv.scores, [1.25, 1.0], rtol=0, atol=1e-12)
        assert cv.measure == "empmult"

    def test_zero_coefficient_is_undefined(self):
        cv = employment_multiplier(TWO_SECTOR, [0.0, 1.0])
        assert cv.undefined.tolist() == [True, False]
        assert np.isnan(cv.scores[0])
        assert np.isfinite(cv.scores[1])

    def test_negative_employment_rejected(self):
        with pytest.raises(DataError):
            employment_multiplier(TWO_SECTOR, [-1.0, 1.0])

    def test_wrong_length_rejected(self):
        with pytest.raises(DimensionMismatchError):
            employment_multiplier(TWO_SECTOR, [1.0, 1.0, 1.0])

    def test_uniform_employment_reduces_to_output_multiplier(self):
        a = productive(6, 9)
        emp = employment_multiplier(a, np.full(6, 3.0))
        out = output_multiplier(a)
        assert np.allclose(emp.scores, out.scores, rtol=1e-12, atol=0)


class TestApplyRpc:
    def test_vector_scales_supplier_columns(self):
        flows = np.array([[0.0, 2.0], [4.0, 0.0]])
        scaled = apply_rpc(flows, [0.5, 1.0])
        assert (scaled == [[0.0, 2.0], [2.0, 0.0]]).all()

    def test_matrix_scales_cell_by_cell(self):
        flows = np.array([[0.0, 2.0], [4.0, 0.0]])
        scaled = apply_rpc(flows, [[1.0, 0.25], [0.5, 1.0]])
        assert (scaled == [[0.0, 0.5], [2.0, 0.0]]).all()

    @pytest.mark.parametrize("rpc", [[1.5, 0.5], [-0.1, 0.5]])
    def test_coefficients_outside_unit_interval_rejected(self, rpc):
        with pytest.raises(DomainError):
            apply_rpc(np.ones((2, 2)), rpc)

    def test_wrong_shape_rejected(self):
        with pytest.raises(DataError):
            apply_rpc(np.ones((2, 2)), np.ones((3, 3)))

    def test_flow_matrix_round_trip(self, k3_flows):
        m = FlowMatrix(k3_flows)
        scaled = apply_rpc(m, np.full(3, 0.5))
        assert isinstance(scaled, FlowMatrix)
        assert scaled.sectors == m.sectors
        assert (scaled.values == 0.5 * m.values).all()


class TestRegionalInputs:
    def test_rows_scale_by_purchaser_output(self):
        a = np.array([[0.0, 0.2], [0.3, 0.0]])
        flows = regional_inputs(a, [10.0, 100.0])
        assert (flows == [[0.0, 2.0], [30.0, 0.0]]).all()

    def test_negative_output_rejected(self):
        with pytest.raises(DataError):
            regional_inputs(np.ones((2, 2)), [1.0, -1.0])

    def test_flow_matrix_round_trip(self, k3_flows):
        m = FlowMatrix(k3_flows)
        flows = regional_inputs(m, np.ones(3))
        assert isinstance(flows, FlowMatrix)
        assert (flows.values == m.values).all()


class TestEstimators:
    def test_output_estimator_matches_function(self):
        a = productive(5, 11)
        est = OutputMultiplier().fit(a)
        cv = output_multiplier(a)
        assert (est.scores_ == cv.scores).all()
        assert (est.requirements_ == leontief_inverse(a)).all()

    def test_employment_estimator_requires_y(self):
        with pytest.raises(DataError, match="required"):
            EmploymentMultiplier().fit(TWO_SECTOR)

    def test_employment_estimator_matches_function(self):
        est = EmploymentMultiplier().fit(TWO_SECTOR, y=[2.0, 1.0])
        cv = employment_multiplier(TWO_SECTOR, [2.0, 1.0])
        assert (est.scores_[~cv.undefined] == cv.scores[~cv.undefined]).all()
        assert (est.undefined_ == cv.undefined).all()
