"""Topology of the attractor read off its boundaries.

Three numbers drive the decision: the smallest gap between the boundaries
(zero means the attractor is a graph), the annulus margin (positive means the
images of the two boundary graphs cannot cross the band) and the coverage
defect of the band by the images of its fibres.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .affine import BoundaryPair, SkewParams, _PreimageStencil, branch_values
from .circle import interpolate

JORDAN = "JordanCurve"
ANNULUS = "ClosedAnnulus"
NOT_ANNULUS = "NotAnnulus"
UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class AttractorClassification:
    verdict: str
    jordan_gap: float
    annulus_margin: float
    union_defect: Optional[float]
    notes: str = ""

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "jordan_gap": self.jordan_gap,
                "annulus_margin": self.annulus_margin, "union_defect": self.union_defect,
                "notes": self.notes}


def _fibre_images(p: SkewParams, b: BoundaryPair, theta=None):
    """Lower and upper ends of ``A(I(theta'))`` for every preimage, shape ``(ell, M)``."""
    if theta is None:
        stencil = _PreimageStencil(p.ell, b.n_samples)
        tau_pre = p.tau(stencil.theta)
        lo = branch_values(p, b.rho_minus.samples, stencil, tau_pre)
        hi = branch_values(p, b.rho_plus.samples, stencil, tau_pre)
        return lo, hi
    theta = np.atleast_1d(np.mod(np.asarray(theta, dtype=float), 1.0))
    pre = (theta[None, :] + np.arange(p.ell)[:, None]) / p.ell
    tau_pre = p.tau(pre)
    lo = p.lam * interpolate(b.rho_minus.samples, pre) + tau_pre
    hi = p.lam * interpolate(b.rho_plus.samples, pre) + tau_pre
    return lo, hi


def margin_profile(p: SkewParams, b: BoundaryPair, theta=None) -> np.ndarray:
    """Per-point slack ``min(upper images) - max(lower images)``."""
    lo, hi = _fibre_images(p, b, theta)
    return hi.min(axis=0) - lo.max(axis=0)


def annulus_margin(p: SkewParams, b: BoundaryPair, theta=None) -> float:
    """Smallest slack over the grid, or over the given points."""
    return float(margin_profile(p, b, theta).min())


def _largest_gap(lo: np.ndarray, hi: np.ndarray, bottom: np.ndarray, top: np.ndarray) -> np.ndarray:
    """Longest part of ``[bottom, top]`` missed by the intervals ``[lo_i, hi_i]``."""
    order = np.argsort(lo, axis=0)
    lo = np.take_along_axis(lo, order, axis=0)
    hi = np.take_along_axis(hi, order, axis=0)
    reach = bottom.copy()
    gap = np.zeros_like(bottom)
    for i in range(lo.shape[0]):
        start = np.minimum(lo[i], top)
        gap = np.maximum(gap, start - reach)
        reach = np.maximum(reach, hi[i])
    return np.maximum(gap, top - reach)


def defect_profile(p: SkewParams, b: BoundaryPair, theta=None) -> np.ndarray:
    lo, hi = _fibre_images(p, b, theta)
    if theta is None:
        bottom, top = b.rho_minus.samples.copy(), b.rho_plus.samples.copy()
    else:
        bottom = interpolate(b.rho_minus.samples, theta)
        top = interpolate(b.rho_plus.samples, theta)
    return np.maximum(_largest_gap(lo, hi, np.atleast_1d(bottom), np.atleast_1d(top)), 0.0)


def union_defect(p: SkewParams, b: BoundaryPair, theta=None) -> float:
    """Largest uncovered length of a fibre by the images of its preimage fibres."""
    return float(defect_profile(p, b, theta).max())


def classify(p: SkewParams, b: BoundaryPair, tol_j: Optional[float] = None,
             tol_a: Optional[float] = None) -> AttractorClassification:
    """Jordan curve, closed annulus, neither, or undetermined.

    Tolerances default to ten times the boundary tolerance.
    """
    if not b.residual <= b.tol:
        raise ValueError(f"boundaries not converged (residual {b.residual:.3g} > {b.tol:.3g})")
    tol_j = 10 * b.tol if tol_j is None else tol_j
    tol_a = 10 * b.tol if tol_a is None else tol_a
    gap = float(b.gap.min())
    margin = annulus_margin(p, b)
    defect = union_defect(p, b)
    notes = ""
    if gap < tol_j:
        verdict = JORDAN
    elif margin > tol_a:
        verdict = ANNULUS
    elif p.ell == 2 and margin < -tol_a:
        verdict = NOT_ANNULUS
    elif defect < tol_a:
        verdict = ANNULUS
        notes = "decided by fibre coverage"
    elif defect > 2 * tol_a:
        verdict = NOT_ANNULUS
        notes = "decided by fibre coverage"
    else:
        verdict = UNDETERMINED
    if verdict == ANNULUS and p.lam <= 1.0 / p.ell:
        verdict = NOT_ANNULUS
        notes = "contraction too strong for an annulus; numerical margin overruled"
    return AttractorClassification(verdict, gap, margin, defect, notes)


def contact_set(p: SkewParams, b: BoundaryPair, tol: Optional[float] = None,
                horizon: int = 64):
    """Grid points where the upper boundary equation is attained, and the
    points whose forward orbit stays near that set for ``horizon`` steps.

    Returns two sorted arrays of grid indices.
    """
    tol = 10 * b.tol if tol is None else tol
    n = b.n_samples
    idx = np.arange(n)
    rho = b.rho_plus.samples
    lhs = p.lam * rho + p.tau(idx / n)
    mask = np.abs(lhs - rho[(p.ell * idx) % n]) < tol
    near = mask | np.roll(mask, 1) | np.roll(mask, -1)
    keep = mask.copy()
    x = idx.copy()
    for _ in range(horizon):
        x = (p.ell * x) % n
        keep &= near[x]
    return np.nonzero(mask)[0], np.nonzero(keep)[0]
