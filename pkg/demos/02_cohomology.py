# %% [markdown]
# # Jordan curves and the cohomological operator
#
# `L_lam mu = mu(2 theta) - lam mu(theta)`. When `tau = L_lam mu` the
# attractor collapses onto the graph of `mu`.

# %%
import numpy as np

from solenoid import (SkewParams, apply_L, boundary_fixed_point, classify, coboundary_witness,
                      decompose, from_trig_poly, scan_jordan, solve_L)

cos = from_trig_poly([(1, 1.0, 0.0)])
tau = apply_L(0.5, cos)
p = SkewParams(2, 0.5, tau)
b = boundary_fixed_point(p, n=4096)
print("gap to mu:", np.max(np.abs(b.rho_plus.samples - cos.samples)),
      np.max(np.abs(b.rho_minus.samples - cos.samples)))
print("verdict:", classify(p, b).verdict)

# %% [markdown]
# `scan_jordan` finds every `lam` for which the equation is solvable.

# %%
print(scan_jordan(tau))
mu, residual = solve_L(0.5, tau)
print("recovered:", mu.closed_form, "residual", residual)

# %% [markdown]
# Stacking operators and peeling them off again.

# %%
rng = np.random.default_rng(0)
mu = from_trig_poly([(k, rng.normal() / k, rng.normal() / k) for k in range(1, 6)])
stacked = apply_L(1.0, apply_L(0.7, apply_L(0.7, mu)))
d = decompose(stacked)
print("factors:", [round(x, 9) for x in d.factors])
print("residual error:", np.max(np.abs(d.residual.samples - mu.samples)))

# %% [markdown]
# `cos 2 pi theta` is not a coboundary: the fixed point and the 2-cycle
# `{1/3, 2/3}` have Birkhoff sums of opposite sign.

# %%
v = coboundary_witness(cos)
print(v.kind, v.positive.fractions, v.positive_sum, v.negative.fractions, v.negative_sum)
