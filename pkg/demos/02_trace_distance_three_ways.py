"""Three routes to the trace-norm geometric discord D_1.

1. Closed form: the middle magnitude c0 of the correlation vector.
2. Distance to classical states on the three coordinate axes, minimized
   over the position l along each axis.
3. Distance to the measured state, minimized over measurement directions
   parameterized by the simplex u = (n1^2, n2^2, n3^2). The minimum always
   sits at a vertex of the simplex.
"""

# %%
import numpy as np

from schatten_discord.measures import (
    classical_axis_distance,
    d1_by_classical_axes,
    geometric_discord_1norm,
    noq_by_matrix,
    noq_minimize,
    noq_objective,
    simplex_lattice,
)

c = (0.5, -0.3, 0.1)

# %% Route 2: scan l along each axis; the minimum is at l = c_axis
for axis in (1, 2, 3):
    ls = np.linspace(-1, 1, 2001)
    d = [classical_axis_distance(c, axis, l) for l in ls]
    k = int(np.argmin(d))
    print(f"axis {axis}: min {d[k]:.6f} at l = {ls[k]:+.3f}")
print("min over axes:", d1_by_classical_axes(c))

# %% Route 3: the simplex objective 2 (gamma_- + gamma_+), checked against a matrix computation
u = simplex_lattice(50)
values = noq_objective(c, u)
value, best = noq_minimize(c)
print(f"\nsimplex minimum {value:.12f} at u = {best}")
print(f"objective range on the lattice: [{values.min():.4f}, {values.max():.4f}]")
n = np.sqrt(u[123])
print(f"u = {u[123]}: formula {values[123]:.12f}, matrix {noq_by_matrix(c, n):.12f}")

# %% Route 1
print("\nclosed form c0:", geometric_discord_1norm(c))
