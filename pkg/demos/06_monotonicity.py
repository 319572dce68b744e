"""Do different discord measures order states the same way?

On the SU(2) line c = (t, t, t) they do: Q, D_G and D_1 all grow with t.
In the U(1) triangle c1 = c2 they do not. There D_1 = |c1| is flat along
c3 while Q and D_G are not, so "related" depends on how a flat direction
is scored. The product rule counts a flat measure as compatible with
anything. The sign rule demands matching signs.
"""

# %%
import numpy as np

from schatten_discord.measures import c3_derivatives, monotonicity_map, su2_line

# %% SU(2) line
line = su2_line(7)
for t, q, dg, d1 in line:
    print(f"t = {t:.3f}: Q {q:.4f}  D_G {dg:.4f}  D_1 {d1:.4f}")

# %% U(1) triangle under both rules
for rule in ("product", "sign"):
    rows = monotonicity_map(resolution=41, rule=rule)
    share_dg = np.mean([r.related_Q_DG for r in rows])
    share_d1 = np.mean([r.related_Q_D1 for r in rows])
    print(f"{rule:>7} rule: Q~D_G on {share_dg:.0%} of points, Q~D_1 on {share_d1:.0%}")

# %% Where Q is stationary along c3
for c1 in (0.1, 0.2, 0.3):
    on_plus = c3_derivatives(c1, c1**2)[0]
    on_minus = c3_derivatives(c1, -c1**2)[0]
    print(f"c1 = {c1}: dQ/dc3 = {on_plus:+.2e} at c3 = c1^2, {on_minus:+.2e} at c3 = -c1^2")
