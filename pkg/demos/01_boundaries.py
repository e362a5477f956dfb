# %% [markdown]
# # Boundaries and verdicts for a cosine fibre term
#
# The attractor of `(theta, t) -> (2 theta, lam t + cos 2 pi theta)` sits
# between two graphs. Here we watch the band change shape as `lam` grows.

# %%
from pathlib import Path

import numpy as np

from solenoid import SkewParams, boundary_fixed_point, classify, from_trig_poly, sample_attractor
from solenoid.circle import interpolate
from solenoid.render import blank, draw_band, draw_points

OUT = Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)
cos = from_trig_poly([(1, 1.0, 0.0)])

# %% [markdown]
# At `theta = 0` every backward branch can stay at the fixed point, so the
# upper boundary there is the geometric series `1 / (1 - lam)`.

# %%
for lam in (0.3, 0.5, 0.7, 0.9, 0.95):
    p = SkewParams(2, lam, cos)
    b = boundary_fixed_point(p)
    c = classify(p, b)
    print(f"lam={lam:<5} rho+(0)={b.rho_plus.samples[0]:.6f}  1/(1-lam)={1 / (1 - lam):.6f}  "
          f"gap={b.gap.max():.3f}  {c.verdict:<14} margin={c.annulus_margin:+.4f}")

# %% [markdown]
# Small `lam` leaves gaps in the union of images and the verdict is
# `NotAnnulus`; near 1 the band fills in and becomes a closed annulus.

# %%
for lam in (0.5, 0.9):
    p = SkewParams(2, lam, cos)
    b = boundary_fixed_point(p)
    img = blank(512, 256, p.t0)
    lo, hi = b.rho_minus.samples, b.rho_plus.samples
    draw_band(img, lambda x: interpolate(lo, x), lambda x: interpolate(hi, x))
    draw_points(img, *sample_attractor(p, 20000, seed=0))
    img.save(OUT / f"cosine_lam{lam}.pgm")

# %% [markdown]
# Sampled points always land inside the band.

# %%
from solenoid.affine import in_band

p = SkewParams(2, 0.9, cos)
b = boundary_fixed_point(p)
theta, t = sample_attractor(p, 10000, seed=1)
print("all samples inside:", bool(in_band(b, theta, t, slack=1e-3).all()))
