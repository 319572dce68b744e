import numpy as np
import pytest
import scipy.sparse as sp

from schatten_discord import spinchain
from schatten_discord.linalg import SX, SY, SZ
from schatten_discord.spinchain import (
    PatternError,
    XXZParameters,
    build_hamiltonian,
    correlation_vector,
    correlators,
    crossover_delta,
    ground_state,
    hellmann_feynman_check,
    sweep,
    sweep_point,
    sz_commutator_norm,
    total_sz,
    two_site_rdm,
)


def dense_hamiltonian(L, delta):
    # oracle: explicit Kronecker products, one bond at a time
    def site_op(op, i):
        out = np.array([[1.0]])
        for k in range(L):
            out = np.kron(out, op if k == i else np.eye(2))
        return out

    h = np.zeros((2**L, 2**L), dtype=complex)
    for i in range(L):
        j = (i + 1) % L
        for op, w in ((SX, 1.0), (SY, 1.0), (SZ, delta)):
            h += -0.5 * w * site_op(op, i) @ site_op(op, j)
    return h


def solve(L, delta):
    p = XXZParameters(L, delta)
    return p, ground_state(build_hamiltonian(p), p)


class TestParameters:
    @pytest.mark.parametrize("L", [3, 0, 18])
    def test_invalid_L(self, L):
        with pytest.raises(ValueError):
            XXZParameters(L, 0.5)

    def test_sweep_requires_L4(self):
        with pytest.raises(ValueError):
            sweep((0, 0.5), 0.5, 2)


class TestHamiltonian:
    @pytest.mark.parametrize("L,delta", [(4, 0.0), (4, 0.7), (6, -1.3)])
    def test_matches_kron_oracle(self, L, delta):
        h = build_hamiltonian(XXZParameters(L, delta)).toarray()
        assert np.allclose(h, dense_hamiltonian(L, delta), atol=1e-14)

    def test_two_site_spectrum(self):
        # the single bond is counted twice under the periodic wrap
        h = build_hamiltonian(XXZParameters(2, 1.0)).toarray()
        assert np.allclose(np.linalg.eigvalsh(h), [-1, -1, -1, 3])
        assert np.allclose(h, dense_hamiltonian(2, 1.0))

    def test_hermitian_and_symmetric(self):
        h = build_hamiltonian(XXZParameters(8, 0.3))
        assert abs(h - h.T).max() == 0
        assert sz_commutator_norm(h, 8) < 1e-12

    def test_lanczos_matches_dense(self):
        # L = 12 has a 924-state Sz = 0 sector, above the dense cutoff
        p = XXZParameters(12, 0.0)
        h = build_hamiltonian(p)
        e_dense = np.linalg.eigvalsh(h.toarray())[0]
        assert abs(ground_state(h, p).energy - e_dense) < 1e-10

    def test_small_chain_lanczos_cross_check(self, monkeypatch):
        p = XXZParameters(8, -0.7)
        h = build_hamiltonian(p)
        dense = ground_state(h, p).energy
        monkeypatch.setattr(spinchain, "DENSE_MAX", 0)
        assert abs(ground_state(h, p).energy - dense) < 1e-10


class TestGroundState:
    def test_ferromagnetic_doublet(self):
        p, gs = solve(8, 1.5)
        assert gs.degeneracy == 2 and sorted(gs.sectors) == [-8, 8]
        assert abs(gs.expectation(total_sz(8))) < 1e-12
        assert np.allclose(two_site_rdm(gs, 8), np.diag([0.5, 0, 0, 0.5]))

    def test_singlet_below_one(self):
        p, gs = solve(8, 0.5)
        assert gs.degeneracy == 1 and gs.sectors == [0]
        ev = np.linalg.eigvalsh(dense_hamiltonian(8, 0.5))
        assert abs(gs.energy - ev[0]) < 1e-10 and ev[1] - ev[0] > 1e-3

    def test_residual(self):
        p, gs = solve(12, 0.3)
        h = build_hamiltonian(p)
        for v in gs.vectors:
            assert np.linalg.norm(h @ v - gs.energy * v) < 1e-9

    def test_isotropic_multiplet(self):
        _, gs = solve(6, 1.0)
        assert gs.degeneracy == 7

    def test_density_matrix(self):
        _, gs = solve(4, 1.5)
        rho = gs.density_matrix()
        assert np.isclose(np.trace(rho), 1)


class TestReducedState:
    def test_u1_pattern(self):
        _, gs = solve(8, 0.5)
        rdm = two_site_rdm(gs, 8)
        gxx, gyy, gzz = correlators(rdm)
        a, b1, b2, d, z = rdm[0, 0], rdm[1, 1], rdm[2, 2], rdm[3, 3], rdm[1, 2]
        assert abs(a - (1 + gzz) / 4) < 1e-10 and abs(d - a) < 1e-10
        assert abs(b1 - (1 - gzz) / 4) < 1e-10 and abs(b2 - b1) < 1e-10
        assert abs(z - (gxx + gyy) / 4) < 1e-10

    def test_translation_invariance(self):
        _, gs = solve(10, -0.4)
        ref = two_site_rdm(gs, 10)
        for i in range(10):
            assert np.max(np.abs(two_site_rdm(gs, 10, (i, (i + 1) % 10)) - ref)) < 1e-10

    def test_bad_sites(self):
        _, gs = solve(4, 0.5)
        with pytest.raises(IndexError):
            two_site_rdm(gs, 4, (0, 4))

    def test_correlation_vector(self):
        _, gs = solve(8, 1.5)
        assert tuple(correlation_vector(two_site_rdm(gs, 8))) == pytest.approx((0, 0, 1))
        _, gs = solve(8, 0.5)
        rdm = two_site_rdm(gs, 8)
        c = correlation_vector(rdm)
        gxx, _, gzz = correlators(rdm)
        assert abs(c.c1 - gxx) < 1e-10 and abs(c.c3 - gzz) < 1e-10

    def test_neel_regime(self):
        _, gs = solve(8, -2.0)
        gxx, _, gzz = correlators(two_site_rdm(gs, 8))
        assert abs(gzz) > abs(gxx)

    def test_pattern_violation(self):
        rho = np.eye(4) / 4
        rho[0, 3] = rho[3, 0] = 0.1
        with pytest.raises(PatternError):
            correlation_vector(rho)


class TestHellmannFeynman:
    @pytest.mark.parametrize("delta", [0.5, -0.5])
    def test_bound(self, delta):
        r = hellmann_feynman_check(XXZParameters(10, delta), 1e-3)
        assert r.residual_1 < 1e-5 and r.residual_2 < 1e-5 and r.ok

    def test_energy_identity(self):
        for delta in (-1.7, -0.3, 0.4, 1.3):
            p, gs = solve(8, delta)
            gxx, gyy, gzz = correlators(two_site_rdm(gs, 8))
            assert abs(gs.energy / 8 + (gxx + gyy + delta * gzz) / 2) < 1e-10

    def test_second_order(self):
        p = XXZParameters(8, 0.5)
        r1 = hellmann_feynman_check(p, 2e-2)
        r2 = hellmann_feynman_check(p, 1e-2)
        assert 3 <= r1.residual_2 / r2.residual_2 <= 5

    def test_level_crossing(self):
        with pytest.raises(ValueError):
            hellmann_feynman_check(XXZParameters(8, 1.0005), 1e-3)


class TestSweep:
    def test_invariants(self):
        records = sweep((-1.5, 1.5), 0.25, 8, threads=2)
        for r in records:
            assert abs(r.Gxx - r.Gyy) < 1e-10
            assert abs(r.sz) < 1e-10
            assert abs(r.c.c1 - r.c.c2) < 1e-10
            assert abs(r.measures.geometric_1norm - abs(r.Gxx)) < 1e-10
            assert abs(r.energy_density + (r.Gxx + r.Gyy + r.delta * r.Gzz) / 2) < 1e-10
            m = r.measures
            if r.delta > 1:
                assert max(m.as_dict().values()) < 1e-8
            elif r.delta < 1:
                assert min(m.entropic_q, m.geometric_2norm, m.geometric_1norm) > 0

    def test_guard_band(self):
        r = sweep_point(1.0, 6)
        assert np.isnan(r.dE_dDelta) and np.isnan(r.hf_residuals[0])
        assert np.isfinite(sweep_point(0.99, 6).dE_dDelta)

    def test_ferromagnetic_point(self):
        m = sweep_point(1.2, 8).measures
        assert max(m.as_dict().values()) < 1e-12

    def test_thread_independence(self):
        a = [r.row() for r in sweep((-0.5, 0.5), 0.5, 6, threads=1)]
        b = [r.row() for r in sweep((-0.5, 0.5), 0.5, 6, threads=3)]
        assert a == b

    def test_range_checked(self):
        with pytest.raises(ValueError):
            sweep((-3, 0), 0.5, 6)

    def test_finite_size_energy(self):
        for delta in (-0.5, 0.0, 0.5):
            e8 = solve(8, delta)[1].energy / 8
            e12 = solve(12, delta)[1].energy / 12
            assert abs(e8 - e12) < 0.05 * abs(e12)

    def test_crossover_helper(self):
        records = sweep((-1.2, -0.8), 0.1, 8)
        assert abs(crossover_delta(records) + 1) < 0.05


def test_total_sz_diagonal():
    sz = total_sz(4)
    assert isinstance(sz, sp.spmatrix) or sp.issparse(sz)
    assert sz.diagonal()[0] == 4 and sz.diagonal()[-1] == -4
