"""
Least-favorable signals and the minimax threshold
=================================================

For the worst three-point signal (amplitude going to infinity) soft
thresholding has a closed-form risk M(eps, alpha). Its minimum over alpha
fixes the optimal ratio delta = 2 M, whatever the noise level.
"""

# %%
import numpy as np

from _common import plt, save
from ampdesign import Domain, design_lf, optimal_alpha
from ampdesign.numerics import bisect_root

eps = np.linspace(0.005, 1, 200)
fig, ax = plt.subplots()
for domain in (Domain.REAL, Domain.COMPLEX):
    m = [optimal_alpha(e, domain)[1] for e in eps]
    ax.plot(eps, m, label=domain.value)
ax.axhline(0.5, ls=":", c="gray")
ax.set_xlabel("sparsity eps")
ax.set_ylabel("minimax risk M")
ax.legend()
save(fig, "lf_risk_vs_eps.png")

# %%
# Where does the optimal ratio cross 1? That is where M = 1/2.
for domain in (Domain.REAL, Domain.COMPLEX):
    e_half = bisect_root(lambda e: optimal_alpha(e, domain)[1] - 0.5, 0.01, 0.99)
    print(f"{domain.value}: delta_dagger < 1 for eps < {e_half:.4f}")

# %%
# The answer does not depend on the noise base level; only the attained
# error scales with it.
for s0 in (0.01, 1.0, 100.0):
    r = design_lf(0.1, Domain.REAL, s0)
    print(f"sigma0^2={s0:>6}: delta_dagger={r.delta_dagger:.6f}  Err={r.err_min:.4g}")
