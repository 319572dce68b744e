import json

import numpy as np
import pytest

from schatten_discord.oracle import (
    HISTOGRAM_BINS,
    d1_sample_min,
    d1_sample_minima,
    d2_sample_min,
    delta_curves,
    delta_histogram,
    delta_statistic,
    powerlaw_fit,
)
from schatten_discord.states import (
    bd_density_matrix,
    cq_density_matrix,
    sample_classical,
)


class TestD1Sampling:
    def test_classical_target_approaches_zero(self):
        rng = np.random.default_rng(0)
        rho = cq_density_matrix(sample_classical(rng))
        small = d1_sample_min(rho, 100, np.random.default_rng(1), family="measured")
        large = d1_sample_min(rho, 20_000, np.random.default_rng(1), family="measured")
        assert large <= small
        assert large < 0.02

    def test_bell_vertex_lower_bound(self):
        value = d1_sample_min(bd_density_matrix((1, 1, -1)), 100_000, np.random.default_rng(2))
        assert value >= 1 - 1e-9

    def test_nested_minima_nonincreasing(self):
        rho = bd_density_matrix((0.5, -0.3, 0.1))
        mins = d1_sample_minima(rho, [10, 100, 1000, 5000, 10_000], np.random.default_rng(3))
        assert all(a >= b for a, b in zip(mins, mins[1:]))
        # the prefix property: asking for fewer samples gives the same answer
        assert d1_sample_min(rho, 1000, np.random.default_rng(3)) == mins[2]

    def test_nc_zero(self):
        with pytest.raises(ValueError):
            d1_sample_min(np.eye(4) / 4, 0, np.random.default_rng(0))

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            d1_sample_min(np.eye(4) / 4, 5, np.random.default_rng(0), family="other")

    @pytest.mark.parametrize("c", [(0.5, -0.3, 0.1), (0.2, 0.6, -0.1), (-0.7, -0.2, -0.1)])
    def test_delta_nonnegative(self, c):
        for family in ("random", "measured"):
            assert delta_statistic(c, 4000, np.random.default_rng(4), family) >= -1e-9

    def test_axis_state_converges(self):
        # the distance grows linearly in the axis misalignment, which shrinks like Nc^(-1/2)
        coarse = delta_statistic((0, 0, 0.6), 200, np.random.default_rng(5), "measured")
        fine = delta_statistic((0, 0, 0.6), 20_000, np.random.default_rng(5), "measured")
        assert -1e-9 <= fine < 0.02
        assert fine <= coarse

    def test_measured_family_within_ten_percent(self):
        rng = np.random.default_rng(6)
        for c in [(0.5, -0.3, 0.1), (0.6, 0.25, 0.1), (-0.4, -0.4, -0.2)]:
            c0 = np.median(np.abs(c))
            assert d1_sample_min(bd_density_matrix(c), 100_000, rng, "measured") <= 1.1 * c0


class TestDeltaProtocol:
    def test_thread_independence(self):
        _, a = delta_curves(12, [10, 100, 500], seed=7, threads=1)
        _, b = delta_curves(12, [10, 100, 500], seed=7, threads=4)
        assert np.array_equal(a, b)

    def test_paired_monotonicity(self):
        _, d = delta_curves(30, [100, 10_000], seed=8)
        assert np.all(d[:, 1] <= d[:, 0])
        assert d[:, 1].mean() < d[:, 0].mean()

    def test_histogram_invariants(self):
        stats = delta_histogram(60, 1000, seed=9)
        assert stats.counts.sum() == 60
        assert len(stats.counts) == HISTOGRAM_BINS
        assert np.all(stats.deltas >= -1e-9)
        assert stats.bin_edges[0] == 0.0
        doc = json.loads(stats.to_json())
        assert {"seed", "N_states", "Nc", "mean_delta", "bin_edges", "counts"} <= set(doc)

    def test_seed_reproducible(self):
        a = delta_histogram(10, 200, seed=11)
        b = delta_histogram(10, 200, seed=11)
        assert a.to_json() == b.to_json()


class TestPowerLaw:
    def test_exact_synthetic(self):
        xs = [10, 100, 1000, 10_000]
        a, b = powerlaw_fit([(x, 2 * x**-0.5) for x in xs])
        assert abs(a - 2) < 1e-12 and abs(b + 0.5) < 1e-12

    def test_constant(self):
        _, b = powerlaw_fit([(10, 0.3), (100, 0.3), (1000, 0.3)])
        assert abs(b) < 1e-12

    def test_errors(self):
        with pytest.raises(ValueError):
            powerlaw_fit([(10, 0.1), (100, 0.0), (1000, 0.05)])
        with pytest.raises(ValueError):
            powerlaw_fit([(10, 0.1), (100, 0.05)])


class TestD2Sampling:
    def test_lower_bound_and_convergence(self):
        c = (0.5, -0.3, 0.1)
        exact = (0.1**2 + 0.3**2) / 4
        value = d2_sample_min(bd_density_matrix(c), (2, 2), 20_000, np.random.default_rng(12))
        assert exact - 1e-9 <= value <= 1.1 * exact

    def test_random_b_states_bound(self):
        c = (0.5, -0.3, 0.1)
        exact = (0.1**2 + 0.3**2) / 4
        value = d2_sample_min(bd_density_matrix(c), (2, 2), 5000, np.random.default_rng(13), "random")
        assert value >= exact - 1e-9

    def test_bell_vertex(self):
        value = d2_sample_min(bd_density_matrix((1, 1, -1)), (2, 2), 20_000, np.random.default_rng(14))
        assert 0.5 - 1e-9 <= value < 0.51

    def test_classical_input(self):
        rho = cq_density_matrix(sample_classical(np.random.default_rng(15)))
        assert d2_sample_min(rho, (2, 2), 20_000, np.random.default_rng(16)) < 1e-3

    def test_unsupported_dims(self):
        with pytest.raises(ValueError):
            d2_sample_min(np.eye(6) / 6, (2, 3), 10, np.random.default_rng(0))
        with pytest.raises(ValueError):
            d2_sample_min(np.eye(4) / 4, (2, 2), 10, np.random.default_rng(0), "other")
