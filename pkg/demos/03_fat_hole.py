# %% [markdown]
# # A Lipschitz fibre term whose attractor has a hole
#
# The profile is zero on a long arc and climbs to a plateau on a periodic
# cycle of the doubling map. The lower boundary stays at zero, the upper one
# peaks above the cycle, and the union of images misses a region near
# `theta = 1/15`.

# %%
from pathlib import Path

import numpy as np

from solenoid import SkewParams, boundary_fixed_point, build_fat_hole, classify, verify_fat_hole
from solenoid.circle import interpolate
from solenoid.examples import fat_hole_params, region_top, required_samples
from solenoid.render import REGION, blank, draw_band

OUT = Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)

# %%
for lam in (0.55, 0.6, 0.7, 0.8, 0.9):
    pr = fat_hole_params(lam)
    print(f"lam={lam}: period {pr.p}, depth {pr.n_cap}, samples needed {required_samples(pr):.3g}, "
          f"invariants ok: {all(pr.check_invariants().values())}")

# %% [markdown]
# Up to `lam = 0.7` a grid of about `1e5` points resolves every margin. At
# `0.8` and `0.9` the plateaus shrink so far that only the parameters can be
# checked.

# %%
tau, pr = build_fat_hole(0.6)
p = SkewParams(2, 0.6, tau)
b = boundary_fixed_point(p)
report = verify_fat_hole(tau, pr, b)
for key, value in report.to_dict().items():
    print(f"{key:>18}: {value}")
print("verdict:", classify(p, b).verdict)

# %%
img = blank(1024, 512, p.t0)
lo, hi = b.rho_minus.samples, b.rho_plus.samples
draw_band(img, lambda x: interpolate(lo, x), lambda x: interpolate(hi, x))
draw_band(img, lambda x: interpolate(lo, x), lambda x: region_top(pr, x), REGION)
img.save(OUT / "fat_hole.pgm")
