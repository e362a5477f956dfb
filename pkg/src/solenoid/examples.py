"""Two worked families.

The fat-hole construction is an affine skew product over the doubling map
whose attractor has interior but is not an annulus.  The log-quadratic
family ``z -> (lam |z| + 1 - lam) z^2/|z|^2 + c`` has an annular attractor for
small ``c`` once ``lam`` is close to 1.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .affine import BoundaryPair, ConvergenceError, SkewParams, boundary_fixed_point
from .circle import CircleFunction, from_callable, interpolate
from .perturbed import (FailsPreservation, MonotonicityError, classify_map,
                        estimate_constants, log_quadratic_map, perturbed_boundaries,
                        rescaled_limit_params)
from .topology import _largest_gap, annulus_margin, margin_profile

# ratio between consecutive plateau margins; anything above 2 works
LADDER_RATIO = 2.5


def _smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def _arc_contains(a: float, b: float, theta, closed: bool = True):
    """Membership in the positively oriented arc from ``a`` to ``b``."""
    length = (b - a) % 1.0
    d = np.mod(np.asarray(theta, dtype=float) - a, 1.0)
    if closed:
        return d <= length + 1e-15
    return (d > 0) & (d < length)


@dataclass(frozen=True)
class FatHoleParams:
    """Constants of the fat-hole construction over the doubling map.

    ``theta_cycle[j]`` is ``theta_j``; the cycle runs ``theta_1 < ... <
    theta_{p-1} < theta_0`` around the circle and ``I_j = (theta_j,
    theta_{j+1})`` with indices mod ``p``.  ``n_cap`` is the depth ``N``
    after which backward orbits starting half a turn from ``theta_0`` must
    leave the plateaus.
    """

    lam: float
    p: int
    eta: float
    theta_cycle: tuple
    delta: float
    t0: float
    t1: float
    n_cap: int
    epsilons: tuple
    lambda_prime: float

    @property
    def partial_sum(self) -> float:
        """``lam + ... + lam^(p-1)``."""
        return sum(self.lam ** k for k in range(1, self.p))

    @property
    def eta_prime(self) -> float:
        return 0.5 * (1.0 + self.partial_sum * self.eta)

    @property
    def cycle_points(self) -> np.ndarray:
        return np.array([float(x) for x in self.theta_cycle])

    @property
    def arc_length_i0(self) -> float:
        th = self.theta_cycle
        return float((th[1] - th[0]) % 1)

    def plateau(self, j: int) -> tuple[float, float]:
        """Endpoints of ``I_j`` shrunk by ``eps_j`` on both sides."""
        th = self.cycle_points
        eps = self.epsilons[j]
        return (th[j] + eps) % 1.0, (th[(j + 1) % self.p] - eps) % 1.0

    def check_invariants(self) -> dict[str, bool]:
        lam, eps = self.lam, self.epsilons
        ladder = all(2 * eps[j] < eps[j + 1] for j in range(1, self.p - 1))
        return {
            "eta_sum_exceeds_one": self.partial_sum * self.eta > 1.0 and self.eta < 1.0,
            "t0_traps": self.t0 > 1.0 / (1.0 - lam),
            "t0_beats_t1": self.t0 / lam > self.t1,
            "eps0_window": 0.0 < eps[0] < self.delta * 2.0 ** (-self.n_cap + 1),
            "eps_ladder": ladder,
            # closes the ladder around the cycle: I_{p-1} must cover I_0's plateau
            "eps_ladder_cyclic": 2 * eps[self.p - 1] < eps[0],
            "lambda_prime_window": lam * self.eta < self.lambda_prime < lam,
            "long_arc": self.arc_length_i0 > 0.5,
        }

    def to_dict(self) -> dict:
        out = asdict(self)
        out["theta_cycle"] = [f"{x.numerator}/{x.denominator}" for x in self.theta_cycle]
        out["epsilons"] = list(self.epsilons)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "FatHoleParams":
        d = dict(d)
        d["theta_cycle"] = tuple(Fraction(x) for x in d["theta_cycle"])
        d["epsilons"] = tuple(float(x) for x in d["epsilons"])
        return cls(**d)


def fat_hole_params(lam: float) -> FatHoleParams:
    """Pick the constants for a given contraction ``lam`` in ``(1/2, 1)``.

    ``p`` is minimal with ``lam + ... + lam^(p-1) > 1``, ``eta`` sits half
    way between the threshold and 1, ``T0 = 1.2/(1 - lam)`` and the depth
    ``N >= 2`` is minimal.  The plateau margins form a geometric ladder with
    ratio 2.5 that grows along the cycle from ``eps_1`` and wraps round to
    the largest one ``eps_0 = 0.9 delta 2^(1-N)``.
    """
    if not 0.5 < lam < 1.0:
        raise ValueError(f"contraction must lie in (1/2, 1), got {lam}")
    p, acc = 1, 0.0
    while acc <= 1.0:
        p += 1
        acc += lam ** (p - 1)
    eta = 0.5 * (1.0 / acc + 1.0)
    m = 2 ** p - 1
    cycle = tuple(Fraction(2 ** ((j - 1) % p), m) for j in range(p))
    delta = float((cycle[1] - cycle[0]) % 1) - 0.5
    t0 = 1.2 / (1.0 - lam)

    def t1_of(n):
        return (lam - lam ** n) / (1.0 - lam) + lam ** n * t0 / (1.0 - lam)

    n_cap = 2
    while not t0 / lam > t1_of(n_cap):
        n_cap += 1
    eps0 = 0.9 * delta * 2.0 ** (-n_cap + 1)
    eps = [eps0] + [eps0 / LADDER_RATIO ** (p - j) for j in range(1, p)]
    return FatHoleParams(lam, p, eta, cycle, delta, t0, t1_of(n_cap), n_cap, tuple(eps),
                         0.5 * (lam * eta + lam))


def required_samples(params: FatHoleParams) -> int:
    """Smallest grid resolving the steepest transition with 32 points per ``T0``."""
    return math.ceil(32.0 * params.t0 / min(params.epsilons))


def _knots(params: FatHoleParams):
    """Breakpoints (unwrapped, starting at ``theta_0``) and values of the profile."""
    th = params.cycle_points
    p, t0, lp, eps = params.p, params.t0, params.lambda_prime, params.epsilons
    start = th[0]
    xs, vs = [], []

    def add(x, v):
        xs.append(start + (x - start) % 1.0)
        vs.append(v)

    add(th[0], t0)
    add(th[0] + eps[0], 0.0)
    add(th[1] - eps[0], 0.0)
    for j in range(1, p):
        nxt = th[(j + 1) % p]
        add(th[j], t0)
        add(th[j] + eps[j], lp)
        add(nxt - eps[j], lp)
    xs.append(start + 1.0)
    vs.append(t0)
    xs, vs = np.array(xs), np.array(vs)
    if not np.all(np.diff(xs) > 0):
        raise ValueError("plateaus overlap")
    return xs, vs


def build_fat_hole(lam: float, n_samples: int = 2 ** 17) -> tuple[CircleFunction, FatHoleParams]:
    """Fibre term with a zero plateau on the long arc and ``lambda'`` plateaus elsewhere.

    Plateaus are joined by C1 cubic smoothsteps; the function equals ``T0``
    at every cycle point.
    """
    params = fat_hole_params(lam)
    need = required_samples(params)
    if n_samples < need:
        raise ValueError(f"grid of {n_samples} points too coarse for the transitions; need {need}")
    xs, vs = _knots(params)

    def func(theta):
        theta = np.asarray(theta, dtype=float)
        u = xs[0] + np.mod(theta - xs[0], 1.0)
        i = np.clip(np.searchsorted(xs, u, side="right") - 1, 0, xs.size - 2)
        w = _smoothstep((u - xs[i]) / (xs[i + 1] - xs[i]))
        return vs[i] + (vs[i + 1] - vs[i]) * w

    lip = 1.5 * float(np.max(np.abs(np.diff(vs)) / np.diff(xs)))
    return from_callable(func, n_samples, lip), params


def region_top(params: FatHoleParams, theta) -> np.ndarray:
    """Upper edge of the witness region over ``theta``."""
    theta = np.asarray(theta, dtype=float)
    top = np.full(theta.shape, params.lam)
    a, b = params.plateau(0)
    top = np.where(_arc_contains(a, b, theta), np.maximum(top, params.eta_prime), top)
    for j in range(2, params.p):
        a, b = params.plateau(j)
        h = sum(params.lam ** k for k in range(1, j + 1)) * params.eta
        top = np.where(_arc_contains(a, b, theta), np.maximum(top, h), top)
    return top


def region_coverage(p: SkewParams, params: FatHoleParams, b: BoundaryPair,
                    rows: int = 4096) -> tuple[float, float]:
    """How far the image of the witness region falls short of covering it.

    The region is ``rho_minus <= t <= top`` over each grid point.  Returns
    the largest uncovered fibre length and the cell height ``2 T0 / rows``
    of the raster it is compared with.
    """
    n = b.n_samples
    grid = np.arange(n) / n
    lo_edge = b.rho_minus.samples
    hi_edge = region_top(params, grid)
    pre = (grid[None, :] + np.arange(p.ell)[:, None]) / p.ell
    tau_pre = p.tau(pre)
    img_lo = p.lam * interpolate(lo_edge, pre) + tau_pre
    img_hi = p.lam * region_top(params, pre) + tau_pre
    gap = _largest_gap(img_lo, img_hi, lo_edge.copy(), hi_edge)
    return float(np.max(gap)), float(2.0 * p.t0 / rows)


@dataclass
class FatHoleReport:
    lower_sup: float
    cycle_values: list
    half_turn_value: float
    half_turn_bound: float
    margin_at_theta1: float
    coverage_gap: float
    cell: float
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return asdict(self)


def verify_fat_hole(tau: CircleFunction, params: FatHoleParams, b: BoundaryPair,
                    tol: float = 1e-3, peak_tol: Optional[float] = None,
                    rows: int = 4096) -> FatHoleReport:
    """Check the five boundary and region properties of the construction.

    ``tol`` bounds the lower boundary and the half-turn slack; cycle values
    are compared with ``T0/(1 - lam)`` to ``peak_tol`` (default ``10 tol``),
    since the grid does not contain the cycle points.
    """
    if not b.residual <= b.tol:
        raise ConvergenceError(f"boundaries not converged (residual {b.residual:.3g})")
    peak_tol = 10 * tol if peak_tol is None else peak_tol
    lam, t0 = params.lam, params.t0
    p = SkewParams(2, lam, tau)
    th = params.cycle_points
    lower_sup = float(np.max(np.abs(b.rho_minus.samples)))
    peaks = interpolate(b.rho_plus.samples, th)
    half = (th[0] + 0.5) % 1.0
    half_val = float(interpolate(b.rho_plus.samples, half))
    margin1 = float(margin_profile(p, b, [th[1]])[0])
    gap, cell = region_coverage(p, params, b, rows)
    checks = {
        "lower_boundary_zero": lower_sup < tol,
        "cycle_peaks": bool(np.all(np.abs(peaks - t0 / (1 - lam)) < peak_tol)),
        "half_turn_below": half_val < t0 / lam - tol,
        "negative_margin_theta1": margin1 < 0,
        "region_invariant": bool(gap <= cell),
    }
    return FatHoleReport(lower_sup, [float(x) for x in peaks], half_val, t0 / lam,
                         margin1, gap, cell, checks)


def _threads() -> int:
    env = os.environ.get("SOLENOID_THREADS")
    return max(1, int(env)) if env else (os.cpu_count() or 1)


@dataclass
class ScanEntry:
    c_mod: float
    alpha: float
    verdict: str
    annulus_margin: Optional[float] = None
    jordan_gap: Optional[float] = None
    lambda_hat: Optional[float] = None
    amplification: Optional[float] = None
    reference_margin: Optional[float] = None
    failure: Optional[str] = None


def _scan_one(lam: float, c_mod: float, alpha: float, n: int, tol: float,
              reference: dict, safety: float) -> ScanEntry:
    c = c_mod * complex(math.cos(2 * math.pi * alpha), math.sin(2 * math.pi * alpha))
    try:
        F = log_quadratic_map(lam, c)
        gc = estimate_constants(F, safety=safety)
        b = perturbed_boundaries(F, gc, n=n, tol=tol)
        cls = classify_map(F, gc, b)
    except (FailsPreservation, MonotonicityError, ConvergenceError) as exc:
        return ScanEntry(c_mod, alpha, "Failed", failure=f"{type(exc).__name__}: {exc}")
    ref = reference.get(alpha)
    return ScanEntry(c_mod, alpha, cls.verdict, cls.annulus_margin, cls.jordan_gap,
                     gc.lambda_hat, gc.amplification,
                     None if ref is None else c_mod * ref)


def annulus_scan_log_quadratic(lam: float, c_mods, alphas, n: int = 1024,
                               tol: float = 1e-6, safety: float = 0.01) -> list[ScanEntry]:
    """Perturbed boundaries and the degree-2 annulus margin over a ``(|c|, alpha)`` table.

    ``c = |c| exp(2 pi i alpha)``.  Each entry also carries ``|c|`` times the
    margin of the affine limit map for the same ``alpha``; entries where no
    Lipschitz budget exists are marked ``Failed`` instead of raising.
    ``safety`` is the relative margin put on the estimated slopes.
    """
    alphas = list(alphas)
    reference = {}
    for a in alphas:
        ps = rescaled_limit_params(lam, a, n)
        reference[a] = annulus_margin(ps, boundary_fixed_point(ps, tol=tol))
    jobs = [(cm, a) for cm in c_mods for a in alphas]
    with ThreadPoolExecutor(max_workers=min(_threads(), len(jobs) or 1)) as pool:
        return list(pool.map(lambda job: _scan_one(lam, job[0], job[1], n, tol, reference, safety), jobs))
