"""Affine skew products ``(theta, t) -> (ell theta, lam t + tau(theta))``.

Includes the trapping strip, the boundary operators whose fixed points are
the upper and lower boundaries of the attractor, and the map from backward
orbits (points of the solenoid) onto the attractor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .circle import CircleFunction, extrema, from_samples, interpolate


class ConvergenceError(RuntimeError):
    """Fixed-point iteration hit its cap before reaching the tolerance."""


def trapping_radius(tau: CircleFunction, lam: float) -> float:
    """Half-height ``T0`` of an invariant strip: ``1.05 |tau|_inf / (1 - lam)``.

    Returns 1 for the zero function.
    """
    sup = extrema(tau)[2]
    if sup == 0.0:
        return 1.0
    return 1.05 * sup / (1.0 - lam)


@dataclass(frozen=True, eq=False)
class SkewParams:
    """Parameters of the skew product.

    ``t0`` defaults to :func:`trapping_radius`.
    """

    ell: int
    lam: float
    tau: CircleFunction
    t0: Optional[float] = None

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 2:
            raise ValueError(f"degree must be an integer >= 2, got {self.ell}")
        if not 0.0 < self.lam < 1.0:
            raise ValueError(f"contraction must lie in (0, 1), got {self.lam}")
        object.__setattr__(self, "ell", int(self.ell))
        sup = extrema(self.tau)[2]
        if self.t0 is None:
            object.__setattr__(self, "t0", trapping_radius(self.tau, self.lam))
        elif not (1.0 - self.lam) * self.t0 > sup:
            raise ValueError(f"strip half-height {self.t0} is not trapping (need > {sup / (1 - self.lam)})")


@dataclass(frozen=True, eq=False)
class BoundaryPair:
    """Lower and upper boundary on a common grid."""

    rho_minus: CircleFunction
    rho_plus: CircleFunction
    residual: float
    iterations: int
    tol: float

    @property
    def n_samples(self) -> int:
        return self.rho_plus.n_samples

    @property
    def gap(self) -> np.ndarray:
        return self.rho_plus.samples - self.rho_minus.samples


@dataclass(frozen=True, eq=False)
class Itinerary:
    """Finite backward orbit ``theta_0, theta_1, ..., theta_D``.

    Consecutive entries satisfy ``ell * theta_{k+1} = theta_k mod 1``.
    """

    thetas: np.ndarray
    ell: int = 2

    def __post_init__(self):
        th = np.mod(np.asarray(self.thetas, dtype=float), 1.0)
        if th.ndim != 1 or th.size < 1:
            raise ValueError("itinerary needs theta_0")
        drift = np.mod(self.ell * th[1:] - th[:-1] + 0.5, 1.0) - 0.5
        if drift.size and np.max(np.abs(drift)) > 1e-9:
            raise ValueError("entries are not successive preimages")
        th.setflags(write=False)
        object.__setattr__(self, "thetas", th)

    @property
    def depth(self) -> int:
        return self.thetas.size - 1

    @classmethod
    def from_branches(cls, theta0: float, branches, ell: int = 2) -> "Itinerary":
        out = [float(theta0) % 1.0]
        for j in branches:
            out.append((out[-1] + int(j)) / ell)
        return cls(np.array(out), ell)

    @classmethod
    def random(cls, ell: int, depth: int, rng: np.random.Generator,
               theta0: Optional[float] = None) -> "Itinerary":
        start = rng.random() if theta0 is None else theta0
        return cls.from_branches(start, rng.integers(ell, size=depth), ell)


def apply(p: SkewParams, theta, t):
    """One step of the map."""
    theta = np.asarray(theta, dtype=float)
    out_t = p.lam * np.asarray(t, dtype=float) + p.tau(theta)
    out_theta = np.mod(p.ell * theta, 1.0)
    if out_theta.ndim == 0:
        return float(out_theta), float(out_t)
    return out_theta, out_t


def preimages(ell: int, theta: float) -> np.ndarray:
    """The ``ell`` points mapped to ``theta``, ascending."""
    return (np.mod(theta, 1.0) + np.arange(ell)) / ell


def _circle_dist(a, b):
    d = np.abs(np.mod(np.asarray(a) - np.asarray(b), 1.0))
    return np.minimum(d, 1.0 - d)


def t_lambda(p: SkewParams, it: Itinerary) -> tuple[float, float]:
    """Fibre coordinate of the attractor point coded by ``it``.

    Returns the truncated series ``sum_{k=1}^D lam^(k-1) tau(theta_k)`` and a
    bound on the discarded tail.
    """
    if it.depth < 1:
        raise ValueError("depth must be at least 1")
    weights = p.lam ** np.arange(it.depth)
    value = float(np.dot(weights, p.tau(it.thetas[1:])))
    tail = p.lam ** it.depth * extrema(p.tau)[2] / (1.0 - p.lam)
    return value, tail


def dist_lambda(a: Itinerary, b: Itinerary, lam: float) -> float:
    """Weighted distance ``sum_k lam^k dist(theta_k, theta'_k)``."""
    if a.depth != b.depth:
        raise ValueError(f"depths differ: {a.depth} vs {b.depth}")
    weights = lam ** np.arange(a.depth + 1)
    return float(np.dot(weights, _circle_dist(a.thetas, b.thetas)))


def depth_for(p: SkewParams, resolution: float, cap: int = 5000) -> int:
    sup = extrema(p.tau)[2]
    if sup == 0.0:
        return 1
    d = math.ceil(math.log(resolution * (1.0 - p.lam) / sup) / math.log(p.lam))
    return int(min(max(d, 1), cap))


def sample_attractor(p: SkewParams, n_points: int, depth: Optional[int] = None,
                     seed: int = 0, resolution: float = 1e-10):
    """Random points of the attractor.

    Each point starts from a uniform ``theta_0`` and follows a random backward
    branch for ``depth`` steps.  Returns ``(theta, t)`` arrays.
    """
    rng = np.random.default_rng(seed)
    if depth is None:
        depth = depth_for(p, resolution)
    theta0 = rng.random(n_points)
    theta = theta0.copy()
    t = np.zeros(n_points)
    weight = 1.0
    for _ in range(depth):
        theta = (theta + rng.integers(p.ell, size=n_points)) / p.ell
        t += weight * p.tau(theta)
        weight *= p.lam
    return theta0, t


class _PreimageStencil:
    """Interpolation weights for grid functions at preimages of grid points."""

    def __init__(self, ell: int, n: int):
        idx = np.arange(n)[None, :] + n * np.arange(ell)[:, None]
        x = idx / ell  # in grid units
        i0 = np.floor(x).astype(np.int64)
        self.w = x - i0
        self.i0 = i0 % n
        self.i1 = (i0 + 1) % n
        self.theta = x / n  # (ell, n) preimage positions in [0, 1)

    def __call__(self, samples: np.ndarray) -> np.ndarray:
        return samples[self.i0] * (1.0 - self.w) + samples[self.i1] * self.w


def branch_values(p: SkewParams, rho: np.ndarray, stencil=None, tau_pre=None) -> np.ndarray:
    """``lam rho(theta') + tau(theta')`` for every preimage of every grid point.

    Returns an ``(ell, N)`` array.
    """
    n = rho.size
    stencil = stencil or _PreimageStencil(p.ell, n)
    if tau_pre is None:
        tau_pre = p.tau(stencil.theta)
    return p.lam * stencil(rho) + tau_pre


def boundary_operator(p: SkewParams, rho: CircleFunction, sign: int = 1) -> CircleFunction:
    """Max (``sign=+1``) or min over preimages of ``lam rho + tau``."""
    vals = branch_values(p, rho.samples)
    out = vals.max(axis=0) if sign > 0 else vals.min(axis=0)
    return from_samples(out)


def iteration_cap(lam: float, tol: float, t0: float) -> int:
    return math.ceil(math.log(tol * (1.0 - lam) / (2.0 * t0)) / math.log(lam)) + 16


def boundary_fixed_point(p: SkewParams, n: Optional[int] = None, tol: float = 1e-6) -> BoundaryPair:
    """Upper and lower boundaries of the attractor.

    Iterates the boundary operators from the constants ``+T0`` and ``-T0``
    until successive iterates differ by less than ``tol (1 - lam)``, so the
    distance to the discrete fixed point is below ``tol``.

    Parameters
    ----------
    p : SkewParams
    n : int, optional
        Grid size; defaults to the grid of ``tau``.
    tol : float
        Target sup-norm accuracy.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = n or p.tau.n_samples
    stencil = _PreimageStencil(p.ell, n)
    tau_pre = p.tau(stencil.theta)
    upper = np.full(n, p.t0)
    lower = np.full(n, -p.t0)
    cap = iteration_cap(p.lam, tol, p.t0)
    stop = tol * (1.0 - p.lam)
    done_u = done_l = False
    it = 0
    while not (done_u and done_l):
        if it >= cap:
            raise ConvergenceError(f"no convergence after {cap} iterations")
        it += 1
        if not done_u:
            new = branch_values(p, upper, stencil, tau_pre).max(axis=0)
            done_u = np.max(np.abs(new - upper)) < stop
            upper = new
        if not done_l:
            new = branch_values(p, lower, stencil, tau_pre).min(axis=0)
            done_l = np.max(np.abs(new - lower)) < stop
            lower = new
    res_u = np.max(np.abs(branch_values(p, upper, stencil, tau_pre).max(axis=0) - upper))
    res_l = np.max(np.abs(branch_values(p, lower, stencil, tau_pre).min(axis=0) - lower))
    return BoundaryPair(from_samples(lower), from_samples(upper),
                        float(max(res_u, res_l)), it, tol)


def in_band(b: BoundaryPair, theta, t, slack: float = 0.0) -> np.ndarray:
    """Whether points lie between the boundaries (up to ``slack``)."""
    lo = interpolate(b.rho_minus.samples, theta)
    hi = interpolate(b.rho_plus.samples, theta)
    t = np.asarray(t)
    return (t >= lo - slack) & (t <= hi + slack)
