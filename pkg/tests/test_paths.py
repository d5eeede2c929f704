import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import refimpl
from ionet import (
    DEFAULT_ALPHAS,
    DistanceMatrix,
    FlowMatrix,
    UndefinedScoreError,
    WeightedBetweenness,
    WeightedCloseness,
    betweenness,
    closeness,
    edge_costs,
    geodesic_counts,
    weighted_distance,
)

CHAIN = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]])

# Two-hop route 0->1->2 costs 2+2 = 4 at alpha=1, exactly matching the
# direct edge of weight 1/4 -- an exact float tie.
TIED = np.array([[0.0, 0.5, 0.25], [0.0, 0.0, 0.5], [0.0, 0.0, 0.0]])

STAR = np.array(
    [
        [0.0, 1.0, 1.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ]
)


def small_flows(n, seed, density=0.5):
    rng = np.random.default_rng(seed)
    values = rng.uniform(0.1, 1.0, size=(n, n))
    values[rng.random((n, n)) > density] = 0.0
    np.fill_diagonal(values, 0.0)
    return values


class TestEdgeCosts:
    def test_alpha_zero_makes_unit_costs(self, diamond_flows):
        costs = edge_costs(diamond_flows, 0.0)
        support = diamond_flows > 0
        np.fill_diagonal(support, False)
        assert (costs[support] == 1.0).all()
        assert np.isinf(costs[~support]).all()

    def test_alpha_one_inverts_weights(self):
        costs = edge_costs(np.array([[0.0, 0.25], [0.5, 0.0]]), 1.0)
        assert costs[0, 1] == 4.0 and costs[1, 0] == 2.0

    def test_diagonal_always_infinite(self):
        flows = np.array([[0.9, 0.1], [0.5, 0.5]])
        costs = edge_costs(flows, 1.0)
        assert np.isinf(np.diag(costs)).all()

    def test_accepts_flow_matrix(self, k3_flows):
        a = edge_costs(k3_flows, 0.5)
        b = edge_costs(FlowMatrix(k3_flows), 0.5)
        assert (a == b).all()


class TestGeodesics:
    def test_diamond_hop_distances(self, diamond_flows):
        d, sigma = geodesic_counts(diamond_flows, 0.0)
        want = np.array(
            [
                [0.0, 1.0, 1.0, 2.0],
                [2.0, 0.0, 3.0, 1.0],
                [2.0, 3.0, 0.0, 1.0],
                [1.0, 2.0, 2.0, 0.0],
            ]
        )
        assert (d.values == want).all()
        assert sigma[0, 3] == 2.0  # via 1 or via 2
        assert sigma[1, 2] == 1.0  # the long way round is unique
        assert (np.diag(sigma) == 1.0).all()

    def test_exact_cost_tie_counted(self):
        d, sigma = geodesic_counts(TIED, 1.0)
        assert d.values[0, 2] == 4.0
        assert sigma[0, 2] == 2.0

    def test_perturbed_tie_resolves_to_one_route(self):
        flows = TIED.copy()
        flows[0, 2] *= 1.0 + 1e-6  # direct edge now strictly cheaper
        d, sigma = geodesic_counts(flows, 1.0)
        assert d.values[0, 2] < 4.0
        assert sigma[0, 2] == 1.0

    def test_tie_survives_zero_tolerance(self):
        _, sigma = geodesic_counts(TIED, 1.0, rtol=0.0)
        assert sigma[0, 2] == 2.0  # the tie is exact, not tolerance-made

    def test_unreachable_pairs(self):
        d, sigma = geodesic_counts(CHAIN, 0.0)
        assert np.isinf(d.values[1, 0]) and sigma[1, 0] == 0.0

    def test_matches_bfs_at_alpha_zero(self):
        flows = small_flows(8, 42)
        d, sigma = geodesic_counts(flows, 0.0)
        bd, bs = refimpl.bfs_geodesics(flows > 0)
        assert (d.values == bd).all()
        assert (sigma == bs).all()

    def test_matches_exhaustive_enumeration(self):
        flows = small_flows(5, 7, density=0.7)
        for alpha in (0.5, 1.0, 1.5):
            d, sigma = geodesic_counts(flows, alpha)
            ed, es = refimpl.enumerate_geodesics(flows, alpha)
            assert (d.values == ed).all()
            assert (sigma == es).all()

    def test_weighted_distance_is_the_cost_matrix(self, diamond_flows):
        d = weighted_distance(diamond_flows, 1.0)
        full, _ = geodesic_counts(diamond_flows, 1.0)
        assert (d.values == full.values).all()
        assert d.alpha == 1.0

    def test_distance_matrix_is_frozen(self, diamond_flows):
        d = weighted_distance(diamond_flows, 0.0)
        with pytest.raises((ValueError, RuntimeError)):
            d.values[0, 0] = 5.0

    def test_default_alpha_grid(self):
        assert DEFAULT_ALPHAS == (0.0, 0.5, 1.0, 1.5)


class TestCloseness:
    def test_diamond_hand_values(self, diamond_flows):
        cv = closeness(weighted_distance(diamond_flows, 0.0))
        assert cv.measure == "clo"
        assert np.allclose(cv.scores, [0.25, 1 / 6, 1 / 6, 0.2], rtol=0, atol=1e-15)
        assert not cv.undefined.any()

    def test_strict_raises_on_unreachable(self):
        d = weighted_distance(CHAIN, 0.0)
        with pytest.raises(UndefinedScoreError):
            closeness(d)

    def test_lenient_sums_reachable_part(self):
        cv = closeness(weighted_distance(CHAIN, 0.0), allow_unreachable=True)
        assert cv.scores[0] == 1.0 / 3.0
        assert cv.scores[1] == 1.0 and cv.scores[2] == 1.0
        assert cv.undefined.tolist() == [False, True, True]

    def test_totally_cut_off_sector_is_nan(self):
        flows = np.array([[0.0, 0.0], [1.0, 0.0]])
        cv = closeness(weighted_distance(flows, 0.0), allow_unreachable=True)
        assert np.isnan(cv.scores[0]) and cv.undefined[0]
        assert cv.scores[1] == 1.0 and not cv.undefined[1]

    def test_raw_matrix_with_alpha(self, diamond_flows):
        d = weighted_distance(diamond_flows, 1.5)
        a = closeness(d)
        b = closeness(np.array(d.values), alpha=1.5)
        assert (a.scores == b.scores).all()
        assert a.measure == b.measure == "wclo"

    def test_matches_reference_formula(self):
        flows = small_flows(8, 42)
        d = weighted_distance(flows, 0.0)
        cv = closeness(d, allow_unreachable=True)
        want = refimpl.freeman_closeness(d.values)
        both = cv.scores[~cv.undefined]
        assert (both == want[~cv.undefined]).all()


class TestBetweenness:
    def test_diamond_hand_values(self, diamond_flows):
        cv = betweenness(diamond_flows, 0.0)
        assert cv.measure == "bet"
        assert cv.scores.tolist() == [4.0, 0.5, 0.5, 4.0]

    def test_star_center_takes_all_pairs(self):
        cv = betweenness(STAR, 0.0)
        assert cv.scores.tolist() == [6.0, 0.0, 0.0, 0.0]
        norm = betweenness(STAR, 0.0, normalize=True)
        assert norm.scores[0] == 1.0
        assert norm.meta["normalized"] is True

    def test_normalize_divides_by_pair_count(self, diamond_flows):
        raw = betweenness(diamond_flows, 0.0)
        norm = betweenness(diamond_flows, 0.0, normalize=True)
        assert (norm.scores == raw.scores / 6.0).all()

    def test_two_sectors_have_no_middlemen(self):
        cv = betweenness(np.array([[0.0, 1.0], [1.0, 0.0]]), 0.0, normalize=True)
        assert (cv.scores == 0.0).all()

    def test_unreachable_pairs_contribute_nothing(self):
        cv = betweenness(CHAIN, 0.0)
        assert cv.scores.tolist() == [0.0, 1.0, 0.0]  # only pair (0, 2) via 1

    def test_matches_reference_share_sum(self):
        flows = small_flows(8, 42)
        cv = betweenness(flows, 0.0)
        d, sigma = geodesic_counts(flows, 0.0)
        want = refimpl.share_betweenness(d.values, sigma)
        assert (cv.scores == want).all()

    def test_measure_tag_tracks_alpha(self, diamond_flows):
        assert betweenness(diamond_flows, 1.0).measure == "wbet"
        assert betweenness(diamond_flows, 1.0).meta["alpha"] == 1.0


class TestSelfLoopsAndScaling:
    def test_self_loop_never_lies_on_a_route(self, diamond_flows):
        looped = diamond_flows.copy()
        looped[1, 1] = 0.9
        base_d, base_s = geodesic_counts(diamond_flows, 1.0)
        loop_d, loop_s = geodesic_counts(looped, 1.0)
        assert (base_d.values == loop_d.values).all()
        assert (base_s == loop_s).all()
        a = betweenness(diamond_flows, 1.0)
        b = betweenness(looped, 1.0)
        assert (a.scores == b.scores).all()

    def test_power_of_two_rescale_is_exact(self):
        # x4 on the flows halves every cost at alpha=0.5 exactly, so route
        # structure, tie counts, and betweenness are reproduced bit for bit
        # and closeness doubles exactly.
        flows = small_flows(7, 3, density=0.8)
        d1, s1 = geodesic_counts(flows, 0.5)
        d4, s4 = geodesic_counts(4.0 * flows, 0.5)
        assert (d4.values == 0.5 * d1.values).all()
        assert (s1 == s4).all()
        b1 = betweenness(flows, 0.5)
        b4 = betweenness(4.0 * flows, 0.5)
        assert (b1.scores == b4.scores).all()
        c1 = closeness(d1, allow_unreachable=True)
        c4 = closeness(d4, allow_unreachable=True)
        defined = ~c1.undefined
        assert (c4.scores[defined] == 2.0 * c1.scores[defined]).all()

    def test_generic_rescale_preserves_rankings(self):
        flows = small_flows(9, 17, density=0.8)
        c1 = closeness(weighted_distance(flows, 1.0), allow_unreachable=True)
        c2 = closeness(weighted_distance(3.7 * flows, 1.0), allow_unreachable=True)
        assert (np.argsort(-c1.scores[~c1.undefined]) == np.argsort(-c2.scores[~c2.undefined])).all()
        b1 = betweenness(flows, 1.0)
        b2 = betweenness(3.7 * flows, 1.0)
        assert (np.argsort(-b1.scores) == np.argsort(-b2.scores)).all()


@st.composite
def flow_arrays(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    seed = draw(st.integers(min_value=0, max_value=2**31))
    density = draw(st.sampled_from([0.3, 0.6, 1.0]))
    return small_flows(n, seed, density)


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(flows=flow_arrays(), alpha=st.sampled_from([0.0, 0.5, 1.0, 1.5]))
    def test_distances_respect_triangle_inequality(self, flows, alpha):
        d = weighted_distance(flows, alpha).values
        n = d.shape[0]
        for m in range(n):
            via = d[:, m][:, None] + d[m, :][None, :]
            ok = np.isfinite(via)
            assert (d[ok] <= via[ok] * (1 + 1e-9) + 1e-12).all()

    @settings(max_examples=60, deadline=None)
    @given(flows=flow_arrays(), alpha=st.sampled_from([0.0, 1.0]))
    def test_sigma_positive_exactly_where_reachable(self, flows, alpha):
        d, sigma = geodesic_counts(flows, alpha)
        finite = np.isfinite(d.values)
        assert (sigma[finite] >= 1.0).all()
        assert (sigma[~finite] == 0.0).all()

    @settings(max_examples=60, deadline=None)
    @given(flows=flow_arrays())
    def test_betweenness_nonnegative_and_bounded(self, flows):
        cv = betweenness(flows, 1.0, normalize=True)
        assert (cv.scores >= 0.0).all()
        assert (cv.scores <= 1.0 + 1e-12).all()


class TestEstimators:
    def test_closeness_estimator_matches_function(self, diamond_flows):
        est = WeightedCloseness(alpha=0.0).fit(diamond_flows)
        cv = closeness(weighted_distance(diamond_flows, 0.0))
        assert (est.scores_ == cv.scores).all()
        assert est.centrality_.measure == "clo"
        assert est.distances_.alpha == 0.0

    def test_closeness_estimator_lenient(self):
        est = WeightedCloseness(alpha=0.0, allow_unreachable=True).fit(CHAIN)
        assert est.undefined_.tolist() == [False, True, True]

    def test_betweenness_estimator_matches_function(self, diamond_flows):
        est = WeightedBetweenness(alpha=1.0, normalize=True).fit(diamond_flows)
        cv = betweenness(diamond_flows, 1.0, normalize=True)
        assert (est.scores_ == cv.scores).all()
        assert est.centrality_.meta["normalized"] is True
