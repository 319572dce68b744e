"""Why the trace norm is the right norm for geometric discord.

Attaching an uncorrelated ancilla sigma to qubit b rescales the p-norm
discord by ||sigma||_p^p. For p = 1 that factor is 1. For p = 2 it is the
purity tr sigma^2 = (1 + r^2)/2, so simply discarding a mixed ancilla
raises D_G. Local Pauli channels, on the other hand, never increase D_1.
"""

# %%
import numpy as np

from schatten_discord.channels import (
    AncillaState,
    PauliChannel,
    contractivity_check,
    dg_noncontractivity_witness,
    dp_scaling_check,
    random_contractivity_sweep,
)

c = (1.0, 1.0, -1.0)  # a Bell state: D_1 = 1, D_G = 1/2

# %% Norm scaling for a maximally mixed ancilla
for p in (1, 2, 3):
    r = dp_scaling_check(c, AncillaState(), p)
    print(f"p = {p}: ||sigma||_p^p = {r.sigma_norm_pp:.4f}, "
          f"extended value {r.predicted_extended:.4f} (base {r.base_value:.4f})")

# %% The Hilbert-Schmidt anomaly for a few ancilla Bloch vectors
for rv in [(0, 0, 0), (0, 0.6, 0), (0, 0, 1)]:
    w = dg_noncontractivity_witness(r=rv)
    print(f"r = {rv}: purity {w['purity']:.2f}, D_G gain on removal x{w['dg_gain_on_removal']:.2f}, "
          f"D_1 {w['d1']:.2f} -> {w['d1_extended_norm']:.2f}")

# %% A phase flip on b halves two correlations and D_1 with them
rep = contractivity_check(c, PauliChannel(0.75, 0, 0, 0.25))
print(f"\nphase flip: c -> {rep.c_out}, D_1 {rep.d1_before} -> {rep.d1_after}")

# %% Random states through random Pauli channels
bad = random_contractivity_sweep(5000, np.random.default_rng(3))
print(f"D_1 increased in {bad} of 5000 random trials")
