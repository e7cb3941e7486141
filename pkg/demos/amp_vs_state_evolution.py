"""
AMP against its state-evolution prediction
==========================================

A small Monte Carlo run: Bernoulli-Gaussian signals, posterior-mean AMP,
the noise rule sigma_w^2 = delta * sigma0^2. The scalar recursion predicts
the averaged error closely, and the minimum sits near the designed ratio.
"""

# %%
import numpy as np

from _common import plt, save
from ampdesign import NoiseModel, bernoulli_gaussian, design_bg, monte_carlo, summarize
from ampdesign.state_evolution import se_fixed_point_mse

eps, s0 = 0.1, 0.01
prior = bernoulli_gaussian(eps, 1.0)
noise = NoiseModel(s0)
grid = np.linspace(0.3, 1.5, 9)

rows = summarize(monte_carlo(prior, n=500, delta_grid=grid, noise=noise, trials=10, base_seed=1))
for s in rows:
    print(f"delta={s.delta:.3f}  SE={s.err_se:.3e}  AMP={s.err_empirical:.3e} +- {s.stderr:.1e}")

# %%
fine = np.linspace(0.25, 1.5, 80)
fig, ax = plt.subplots()
ax.plot(fine, [se_fixed_point_mse(prior, d, noise) for d in fine], label="state evolution")
ax.errorbar([s.delta for s in rows], [s.err_empirical for s in rows],
            yerr=[s.stderr for s in rows], fmt="o", label="AMP, n=500")
ax.axvline(design_bg(eps, 1.0, s0).delta_dagger, ls=":", c="gray", label="designed ratio")
ax.set_xlabel("delta")
ax.set_ylabel("MSE")
ax.set_yscale("log")
ax.legend()
save(fig, "amp_vs_se.png")
