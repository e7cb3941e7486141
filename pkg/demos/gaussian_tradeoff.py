"""
More measurements are not always better
=======================================

When every extra measurement shares a fixed energy budget, the signal per
measurement falls like 1/m while the noise variance grows like m. For a
Gaussian signal the reconstruction error therefore has an optimum in the
measurement ratio delta = m/n, and that optimum never exceeds 2.
"""

# %%
# The error curve. With sigma_w^2 = delta * sigma0^2 the asymptotic MMSE of
# a Gaussian signal follows from random matrix theory.
import numpy as np

from _common import plt, save
from ampdesign import design_gaussian
from ampdesign.state_evolution import rmt_gaussian_mse

deltas = np.linspace(0.05, 3, 300)
fig, ax = plt.subplots()
for s0 in (0.1, 0.5, 1.0):
    err = [rmt_gaussian_mse(1.0, d * s0, d) for d in deltas]
    r = design_gaussian(1.0, s0)
    ax.plot(deltas, err, label=f"sigma0^2 = {s0}")
    ax.plot(r.delta_dagger, r.err_min, "k.")
    print(f"sigma0^2={s0}: delta_dagger={r.delta_dagger:.4f}, Err={r.err_min:.4f}")
ax.set_xlabel("delta = m / n")
ax.set_ylabel("MSE")
ax.legend()
save(fig, "gaussian_err_vs_delta.png")

# %%
# The optimum as a function of C1 = sigma_x^2 / sigma0^2. It climbs towards
# 2 for a clean channel and drops below 1 once C1 < 2: in that regime it
# pays to take fewer measurements than unknowns.
c1 = np.geomspace(1e-2, 1e4, 200)
opt = [design_gaussian(c, 1.0).delta_dagger for c in c1]
fig, ax = plt.subplots()
ax.semilogx(c1, opt)
ax.axhline(1, ls=":", c="gray")
ax.axvline(2, ls=":", c="gray")
ax.set_xlabel("C1 = sigma_x^2 / sigma0^2")
ax.set_ylabel("optimal delta")
save(fig, "gaussian_delta_vs_c1.png")
