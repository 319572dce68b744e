"""How close does random sampling of classical states get to D_1?

For each random Bell-diagonal state we draw Nc classical-quantum states and
keep the smallest trace distance. The excess delta = sampled minimum - c0
can never be negative, since c0 is the true minimum, and it shrinks slowly
with Nc. The decay is close to a power law. Every run depends only on the
seed: the same seed gives the same deltas for any thread count.
"""

# %%
import numpy as np

from schatten_discord.oracle import delta_curves, delta_histogram, powerlaw_fit

# %% A small histogram
stats = delta_histogram(n_states=100, nc=2000, seed=1)
print(f"mean delta {stats.mean_delta:.4f}, min delta {stats.deltas.min():.2e}")
peak = int(np.argmax(stats.counts))
print(f"most populated bin: [{stats.bin_edges[peak]:.3f}, {stats.bin_edges[peak + 1]:.3f})")

# %% Decay with Nc, using nested samples so each state's minimum can only go down
ncs = [10, 100, 1000, 10_000]
_, deltas = delta_curves(n_states=40, checkpoints=ncs, seed=2)
points = list(zip(ncs, deltas.mean(axis=0)))
for nc, m in points:
    print(f"Nc = {nc:>6}: mean delta {m:.4f}")
amplitude, exponent = powerlaw_fit(points)
print(f"fit: mean delta ~ {amplitude:.3f} * Nc^{exponent:.3f}")
