"""Graph transforms for Lipschitz cylinder maps close to an affine skew product.

Maps are handled through a lift ``F(s, t) = (f(s, t), g(s, t))`` on the strip
``R x [-T0, T0]`` with ``f(s + 1, t) = f(s, t) + ell`` and ``g`` 1-periodic
in ``s``.  A Lipschitz graph ``t = rho(s)`` is pushed forward by inverting the
increasing map ``s -> f(s, rho(s))`` one branch at a time.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .affine import BoundaryPair, ConvergenceError, SkewParams
from .circle import CircleFunction, from_samples, from_trig_poly, DEFAULT_GRID
from .topology import (AttractorClassification, ANNULUS, JORDAN, NOT_ANNULUS,
                       UNDETERMINED)

TWO_PI = 2.0 * np.pi


class FailsPreservation(ArithmeticError):
    """No Lipschitz budget ``C`` makes the map preserve C-Lipschitz graphs."""


class MonotonicityError(ArithmeticError):
    """The image of a graph folds back over the base circle."""


@dataclass(frozen=True, eq=False)
class CylinderMap:
    """Lift of a degree-``degree`` cylinder map.

    ``func(s, t)`` takes and returns numpy arrays.  ``domain`` bounds ``|t|``
    where ``func`` may be evaluated.
    """

    func: Callable
    degree: int
    t0: float
    domain: float = math.inf
    name: str = ""

    def evaluate(self, s, t):
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        return self.func(s, t)

    def periodicity_defect(self, n_s: int = 64, n_t: int = 9) -> float:
        s, t = _probe(n_s, n_t, self.t0, endpoint=False)
        f0, g0 = self.evaluate(s, t)
        f1, g1 = self.evaluate(s + 1.0, t)
        return float(max(np.max(np.abs(f1 - f0 - self.degree)), np.max(np.abs(g1 - g0))))


@dataclass(frozen=True)
class GraphConstants:
    ell0: float
    lambda0: float
    c12: float
    c21: float
    c: float
    lambda_hat: float

    @property
    def amplification(self) -> float:
        """``(1 + C) / (1 - lambda_hat)``: boundary shift per unit map shift."""
        return (1.0 + self.c) / (1.0 - self.lambda_hat)


def _probe(n_s, n_t, t0, endpoint=True):
    s = np.linspace(0.0, 1.0, n_s + 1 if endpoint else n_s, endpoint=endpoint)
    t = np.linspace(-t0, t0, n_t)
    return np.meshgrid(s, t, indexing="ij")


def affine_lift(p: SkewParams) -> CylinderMap:
    tau = p.tau

    def func(s, t):
        return p.ell * s, p.lam * t + tau(s)

    return CylinderMap(func, p.ell, p.t0, name="affine")


def vertical_perturbation(F: CylinderMap, delta: float, k: int = 1) -> CylinderMap:
    """``F`` followed by ``(theta, t) -> (theta, t + delta sin(2 pi k theta))``."""

    def func(s, t):
        f, g = F.func(s, t)
        return f, g + delta * np.sin(TWO_PI * k * f)

    # the 5% slack in the default strip absorbs small delta
    return CylinderMap(func, F.degree, F.t0, F.domain, name=f"{F.name}+vertical")


def choose_budget(ell0: float, lambda0: float, c12: float, c21: float,
                  c_min: float = 0.0) -> float:
    """Smallest ``C >= c_min`` with ``(c21 + lambda0 C) / (ell0 - c12 C) <= C < ell0 / c12``."""
    gap = ell0 - lambda0
    if gap <= 0:
        raise FailsPreservation(f"expansion {ell0:.4g} does not beat contraction {lambda0:.4g}")
    if c12 <= 1e-15:
        c = max(c21 / gap, c_min)
    else:
        disc = gap * gap - 4.0 * c12 * c21
        if disc < 0:
            raise FailsPreservation("shear too strong: no admissible Lipschitz budget")
        root = math.sqrt(disc)
        lo = 2.0 * c21 / (gap + root)
        hi = (gap + root) / (2.0 * c12)
        c = max(lo, c_min)
        if c > hi:
            raise FailsPreservation(f"required budget {c_min:.4g} exceeds admissible {hi:.4g}")
    return c * (1.0 + 1e-12)


def estimate_constants(F: CylinderMap, n_s: int = 256, n_t: int = 33,
                       c_min: float = 0.0, safety: float = 0.05) -> GraphConstants:
    """Finite-difference estimates of the expansion, contraction and shear bounds.

    The minimum ``s``-slope of ``f`` is scaled by ``1 - safety`` and the
    maximal ``t``-slope of ``g`` and cross slopes by ``1 + safety``.  With
    contraction close to 1 the default margin alone can push ``lambda_hat``
    past 1, so callers working there pass a smaller ``safety``.
    """
    if n_t < 2:
        raise ValueError("need at least two t levels")
    s, t = _probe(n_s, n_t, F.t0)
    f, g = F.evaluate(s, t)
    hs = 1.0 / n_s
    ht = 2.0 * F.t0 / (n_t - 1)
    up, down = 1.0 + safety, 1.0 - safety
    ell0 = down * float(np.min(np.diff(f, axis=0)) / hs)
    c21 = up * float(np.max(np.abs(np.diff(g, axis=0))) / hs)
    c12 = up * float(np.max(np.abs(np.diff(f, axis=1))) / ht)
    lambda0 = up * float(np.max(np.abs(np.diff(g, axis=1))) / ht)
    if ell0 <= 0:
        raise FailsPreservation("map is not expanding along the base")
    c = choose_budget(ell0, lambda0, c12, c21, c_min)
    lambda_hat = (lambda0 * ell0 + c21 * c12) / (ell0 - c12 * c)
    return GraphConstants(ell0, lambda0, c12, c21, c, lambda_hat)


def graph_transform(F: CylinderMap, gc: Optional[GraphConstants], rho: CircleFunction,
                    sign: int = 1, iterations: int = 50) -> CircleFunction:
    """Push the graph of ``rho`` forward and take the max (``sign=+1``) or min
    over the ``ell`` branches above each grid point.
    """
    n = rho.n_samples
    if gc is not None and rho.discrete_lipschitz() > 1.01 * gc.c + 1e-9:
        warnings.warn("graph steeper than the Lipschitz budget")
    vals = np.append(rho.samples, rho.samples[0])
    s = np.arange(n + 1) / n
    x, _ = F.evaluate(s, vals)
    if not np.all(np.diff(x) > 0):
        raise MonotonicityError("image of the graph is not increasing along the base")
    ell = F.degree
    target = (np.arange(n)[None, :] / n + np.arange(ell)[:, None]).ravel()
    target = x[0] + np.mod(target - x[0], ell)
    cell = np.clip(np.searchsorted(x, target, side="right") - 1, 0, n - 1)
    left = s[cell]
    a, b = left, s[cell + 1]
    ra, rb = vals[cell], vals[cell + 1]

    def height(u):
        return ra + (rb - ra) * (u - left) * n

    for _ in range(iterations):
        mid = 0.5 * (a + b)
        fm, _ = F.evaluate(mid, height(mid))
        right = fm > target
        b = np.where(right, mid, b)
        a = np.where(right, a, mid)
    mid = 0.5 * (a + b)
    _, gm = F.evaluate(mid, height(mid))
    gm = gm.reshape(ell, n)
    out = gm.max(axis=0) if sign > 0 else gm.min(axis=0)
    return from_samples(out)


def perturbed_boundaries(F: CylinderMap, gc: GraphConstants, n: int = 1024,
                         tol: float = 1e-6) -> BoundaryPair:
    """Fixed points of the two graph transforms, iterated from ``+-T0``."""
    if not gc.lambda_hat < 1.0:
        raise FailsPreservation(f"graph transform is not a contraction (lambda_hat={gc.lambda_hat:.4g})")
    stop = tol * (1.0 - gc.lambda_hat)
    cap = math.ceil(math.log(stop / (2.0 * F.t0)) / math.log(gc.lambda_hat)) + 16
    upper = from_samples(np.full(n, F.t0))
    lower = from_samples(np.full(n, -F.t0))
    done = [False, False]
    it = 0
    while not all(done):
        if it >= cap:
            raise ConvergenceError(f"no convergence after {cap} iterations")
        it += 1
        if not done[0]:
            new = graph_transform(F, gc, upper, +1)
            done[0] = np.max(np.abs(new.samples - upper.samples)) < stop
            upper = new
        if not done[1]:
            new = graph_transform(F, gc, lower, -1)
            done[1] = np.max(np.abs(new.samples - lower.samples)) < stop
            lower = new
    res = max(np.max(np.abs(graph_transform(F, gc, upper, +1).samples - upper.samples)),
              np.max(np.abs(graph_transform(F, gc, lower, -1).samples - lower.samples)))
    return BoundaryPair(lower, upper, float(res), it, tol)


def map_margin(F: CylinderMap, gc: Optional[GraphConstants], b: BoundaryPair) -> float:
    """Smallest gap between the lowest image of the upper graph and the
    highest image of the lower graph over each base point."""
    low_of_top = graph_transform(F, gc, b.rho_plus, -1).samples
    top_of_low = graph_transform(F, gc, b.rho_minus, +1).samples
    return float(np.min(low_of_top - top_of_low))


def classify_map(F: CylinderMap, gc: Optional[GraphConstants], b: BoundaryPair,
                 tol_j: Optional[float] = None, tol_a: Optional[float] = None) -> AttractorClassification:
    """Margin-based verdict for a general map; decisive both ways only for degree 2."""
    tol_j = 10 * b.tol if tol_j is None else tol_j
    tol_a = 10 * b.tol if tol_a is None else tol_a
    gap = float(b.gap.min())
    margin = map_margin(F, gc, b)
    if gap < tol_j:
        verdict = JORDAN
    elif margin > tol_a:
        verdict = ANNULUS
    elif F.degree == 2 and margin < -tol_a:
        verdict = NOT_ANNULUS
    else:
        verdict = UNDETERMINED
    return AttractorClassification(verdict, gap, margin, None, F.name)


def log_quadratic_map(lam: float, c: complex, t0: Optional[float] = None) -> CylinderMap:
    """``z -> (lam |z| + 1 - lam) z^2 / |z|^2 + c`` in coordinates ``z = exp(2 pi (t + i theta))``."""
    c = complex(c)
    if not abs(c) < 1.0 - lam:
        raise ValueError(f"|c|={abs(c):.4g} must be below 1 - lam = {1 - lam:.4g}")

    def func(s, t):
        radius = lam * np.exp(TWO_PI * t) + 1.0 - lam
        w = radius + c * np.exp(-2j * TWO_PI * s)
        return 2.0 * s + np.angle(w) / TWO_PI, np.log(np.abs(w)) / TWO_PI

    if t0 is None:
        t0 = 2.0 * abs(c) / (TWO_PI * (1.0 - lam)) if c != 0 else 1e-2
    return CylinderMap(func, 2, t0, name=f"log_quadratic(lam={lam}, c={c})")


def rescaled_limit(lam: float, alpha: float) -> CylinderMap:
    """``(theta, t) -> (2 theta, lam t + cos(2 pi (alpha - 2 theta)) / 2 pi)``."""

    def func(s, t):
        return 2.0 * s, lam * t + np.cos(TWO_PI * (alpha - 2.0 * s)) / TWO_PI

    return CylinderMap(func, 2, 1.05 / (TWO_PI * (1.0 - lam)), name=f"rescaled_limit(lam={lam}, alpha={alpha})")


def rescaled_limit_params(lam: float, alpha: float, n: int = DEFAULT_GRID) -> SkewParams:
    """The same map as a :class:`SkewParams` with a trig-polynomial fibre term."""
    tau = from_trig_poly([(2, math.cos(TWO_PI * alpha) / TWO_PI, math.sin(TWO_PI * alpha) / TWO_PI)],
                         0.0, n)
    return SkewParams(2, lam, tau)


def rescale_conjugate(F: CylinderMap, eta: float, t0: Optional[float] = None) -> CylinderMap:
    """``h^-1 o F o h`` with ``h(theta, t) = (theta, eta t)``."""
    if not eta > 0:
        raise ValueError("eta must be positive")
    t0 = F.t0 / eta if t0 is None else t0
    if eta * t0 > F.domain:
        raise ValueError(f"rescaled strip {eta * t0:.4g} leaves the domain {F.domain:.4g}")

    def func(s, t):
        f, g = F.func(s, eta * t)
        return f, g / eta

    return CylinderMap(func, F.degree, t0, F.domain / eta, name=f"{F.name} rescaled by {eta}")


def sup_difference(F: CylinderMap, G: CylinderMap, n_s: int = 64, n_t: int = 9,
                   t0: Optional[float] = None) -> float:
    """Largest coordinate difference of two lifts on an ``n_s x n_t`` probe grid."""
    t0 = min(F.t0, G.t0) if t0 is None else t0
    s, t = _probe(n_s, n_t, t0, endpoint=False)
    f1, g1 = F.evaluate(s, t)
    f2, g2 = G.evaluate(s, t)
    return float(max(np.max(np.abs(f1 - f2)), np.max(np.abs(g1 - g2))))
