import numpy as np
import pytest

from schatten_discord.channels import (
    AncillaState,
    PauliChannel,
    apply_channel_a,
    apply_channel_b,
    apply_pauli_channel_b,
    attach_ancilla,
    contractivity_check,
    dg_noncontractivity_witness,
    dp_scaling_check,
    random_contractivity_sweep,
    remove_ancilla,
)
from schatten_discord.linalg import trace_distance
from schatten_discord.measures import geometric_discord_1norm
from schatten_discord.states import (
    _ball_vectors,
    bd_density_matrix,
    cq_density_matrix,
    from_density_matrix,
    is_physical,
    sample_bd_uniform_batch,
    sample_classical,
)


class TestAncilla:
    def test_pure_and_mixed(self):
        rho = bd_density_matrix((0.5, -0.3, 0.1))
        pure = AncillaState((0, 0, 1))
        assert pure.purity == 1 and np.isclose(np.trace(attach_ancilla(rho, pure)).real, 1)
        assert AncillaState().purity == 0.5

    def test_removal_recovers_state(self):
        rho = bd_density_matrix((0.5, -0.3, 0.1))
        assert np.allclose(remove_ancilla(attach_ancilla(rho, AncillaState((0.2, -0.1, 0.4)))), rho)

    def test_outside_ball(self):
        with pytest.raises(ValueError):
            AncillaState((1, 1, 0))

    def test_norm_p(self):
        s = AncillaState((0, 0.6, 0))
        ev = np.linalg.eigvalsh(s.matrix)
        for p in (1, 2, 3):
            assert np.isclose(s.norm_p(p), (np.abs(ev) ** p).sum() ** (1 / p))


class TestScaling:
    def test_p1_unchanged(self):
        r = dp_scaling_check((0.5, -0.3, 0.1), AncillaState((0.3, 0.1, 0)), 1)
        assert r.sigma_norm_pp == pytest.approx(1.0)
        assert r.predicted_extended == pytest.approx(r.base_value)

    def test_p2_maximally_mixed_factor(self):
        r = dp_scaling_check((0.5, -0.3, 0.1), AncillaState(), 2)
        assert r.sigma_norm_pp == pytest.approx(0.5)

    def test_p2_bell_vertex(self):
        r = dp_scaling_check((1, 1, -1), AncillaState(), 2, nc=4000, rng=np.random.default_rng(0))
        assert abs(r.predicted_extended - 0.25) < 1e-12
        assert r.norm_identity_ok and r.upper_bound_ok and r.floor_ok

    def test_p1_sampled_floor(self):
        r = dp_scaling_check((0.5, -0.3, 0.1), AncillaState((0, 0, 0.5)), 1, nc=4000, rng=np.random.default_rng(1))
        assert r.floor_ok and r.sampled_extended >= 0.3 - 1e-9

    def test_unsupported_p(self):
        with pytest.raises(ValueError):
            dp_scaling_check((0, 0, 0), AncillaState(), 4)

    def test_identity_on_random_triples(self):
        rng = np.random.default_rng(2)
        cs = sample_bd_uniform_batch(rng, 300)
        rs = _ball_vectors(rng, 300)
        for c, r, p in zip(cs, rs, rng.choice([1, 2, 3], 300)):
            rep = dp_scaling_check(c, AncillaState(tuple(r)), int(p))
            assert rep.norm_identity_residual < 1e-10 and rep.upper_bound_ok


class TestPauliChannels:
    def test_phase_flip(self):
        ch = PauliChannel(0.75, 0, 0, 0.25)
        assert tuple(apply_pauli_channel_b((1, 1, -1), ch)) == (0.5, 0.5, -1.0)

    def test_identity_and_depolarizing(self):
        c = (0.5, -0.3, 0.1)
        assert tuple(apply_pauli_channel_b(c, PauliChannel())) == c
        assert np.allclose(tuple(apply_pauli_channel_b(c, PauliChannel(0.25, 0.25, 0.25, 0.25))), 0)

    def test_invalid_probabilities(self):
        with pytest.raises(ValueError):
            PauliChannel(0.5, 0.6, 0, 0)
        with pytest.raises(ValueError):
            PauliChannel(1.2, -0.2, 0, 0)

    def test_kraus_matches_eta(self):
        rng = np.random.default_rng(3)
        for c in sample_bd_uniform_batch(rng, 50):
            ch = PauliChannel.random(rng)
            out_b = apply_channel_b(bd_density_matrix(c), ch)
            out_a = apply_channel_a(bd_density_matrix(c), ch)
            expected = np.asarray(apply_pauli_channel_b(c, ch))
            assert np.allclose(tuple(from_density_matrix(out_b)), expected, atol=1e-12)
            assert np.allclose(tuple(from_density_matrix(out_a)), expected, atol=1e-12)
            assert is_physical(expected)

    def test_contractivity_phase_flip(self):
        r = contractivity_check((1, 1, -1), PauliChannel(0.75, 0, 0, 0.25))
        assert r.d1_before == 1 and r.d1_after == 0.5 and r.ok

    def test_identity_equality(self):
        r = contractivity_check((0.5, -0.3, 0.1), PauliChannel())
        assert r.d1_after == r.d1_before
        assert abs(r.distance_after - r.distance_before) < 1e-12

    def test_random_sweep(self):
        assert random_contractivity_sweep(2000, np.random.default_rng(4)) == 0

    def test_matrix_contraction_against_classical_states(self):
        rng = np.random.default_rng(5)
        for c in sample_bd_uniform_batch(rng, 100):
            ch = PauliChannel.random(rng)
            rho, sigma = bd_density_matrix(c), cq_density_matrix(sample_classical(rng))
            before = trace_distance(rho, sigma)
            after = trace_distance(apply_channel_b(rho, ch), apply_channel_b(sigma, ch))
            assert after <= before + 1e-10
            assert geometric_discord_1norm(apply_pauli_channel_b(c, ch)) <= geometric_discord_1norm(c) + 1e-12


class TestWitness:
    def test_bell_vertex_mixed_ancilla(self):
        w = dg_noncontractivity_witness()
        assert w["purity"] == 0.5 and w["dg_gain_on_removal"] == 2.0
        assert w["anomaly"] and w["ok"]
        assert abs(w["dg_extended_norm"] - 0.25) < 1e-12

    def test_pure_ancilla(self):
        w = dg_noncontractivity_witness(r=(0, 0, 1))
        assert w["purity"] == 1 and not w["anomaly"] and w["ok"]

    @pytest.mark.parametrize("r", [(0, 0, 0), (0, 0, 1), (0.3, 0.4, 0)])
    def test_d1_unchanged(self, r):
        w = dg_noncontractivity_witness(r=r)
        assert abs(w["d1_extended_norm"] - w["d1"]) < 1e-12
        assert np.isclose(w["purity"], (1 + np.dot(r, r)) / 2)
