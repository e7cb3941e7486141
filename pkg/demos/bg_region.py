"""
When to measure less than the signal length
===========================================

For a Bernoulli-Gaussian signal the optimal ratio solves a scalar equation
in the equivalent-noise variance. Sweeping it over noise level and sparsity
shows the region where fewer measurements than unknowns are best.
"""

# %%
import numpy as np

from _common import plt, save
from ampdesign import design_bg, region_sweep_bg

r = design_bg(0.1, 1.0, 0.01)
print(f"eps=0.1, sigma0^2=0.01: delta_dagger={r.delta_dagger:.4f}, Err={r.err_min:.3g}, "
      f"brackets found={len(r.brackets)}")

# %%
# A coarse grid keeps this quick; each cell is one scan plus bisection.
s0_grid = np.linspace(0.02, 1.0, 12)
eps_grid = np.linspace(0.05, 1.0, 12)
cells = region_sweep_bg(1.0, s0_grid, eps_grid)
D = np.array([c.delta_dagger for c in cells]).reshape(len(s0_grid), len(eps_grid))

fig, ax = plt.subplots()
im = ax.pcolormesh(eps_grid, s0_grid, D, shading="auto")
ax.contour(eps_grid, s0_grid, D, levels=[1.0], colors="w")
fig.colorbar(im, label="optimal delta")
ax.set_xlabel("sparsity eps")
ax.set_ylabel("sigma0^2 / sigma_x^2")
save(fig, "bg_region.png")
print(f"{np.mean(D < 1):.0%} of the grid prefers delta < 1")
