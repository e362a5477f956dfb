"""Periodic orbits of ``m_ell`` and Birkhoff sums along them.

A point of period dividing ``p`` is ``j / (ell^p - 1)``; orbits are generated
with integer arithmetic ``j ell^k mod (ell^p - 1)`` so no rounding builds up.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .circle import CircleFunction, add_constant

# largest ell^p - 1 we enumerate
MAX_MODULUS = 2 ** 53


@dataclass(frozen=True)
class PeriodicOrbit:
    """Orbit of ``j / (ell^p - 1)`` of least period ``p``."""

    ell: int
    period: int
    j: int

    @property
    def modulus(self) -> int:
        return self.ell ** self.period - 1

    @property
    def theta0(self) -> Fraction:
        return Fraction(self.j, self.modulus)

    @property
    def numerators(self) -> list[int]:
        m = self.modulus
        return [self.j * self.ell ** k % m for k in range(self.period)]

    @property
    def fractions(self) -> list[Fraction]:
        return [Fraction(n, self.modulus) for n in self.numerators]

    @property
    def points(self) -> np.ndarray:
        return np.array(self.numerators, dtype=float) / self.modulus

    def birkhoff_sum(self, tau: CircleFunction) -> float:
        return float(np.sum(tau(self.points)))


class Witnesses(NamedTuple):
    positive: Optional[PeriodicOrbit]
    negative: Optional[PeriodicOrbit]


@dataclass(frozen=True)
class CoboundaryVerdict:
    kind: str  # "NotCoboundary" or "Inconclusive"
    positive: Optional[PeriodicOrbit] = None
    negative: Optional[PeriodicOrbit] = None
    positive_sum: Optional[float] = None
    negative_sum: Optional[float] = None


def periodic_orbits(ell: int, p_max: int) -> list[PeriodicOrbit]:
    """All orbits of least period ``<= p_max``, one per orbit.

    Each orbit is represented by its smallest point.
    """
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    if ell ** p_max - 1 > MAX_MODULUS:
        raise OverflowError(f"{ell}^{p_max} - 1 exceeds the exact integer range")
    out = []
    for p in range(1, p_max + 1):
        m = ell ** p - 1
        seen = np.zeros(m, dtype=bool)
        for j in range(m):
            if seen[j]:
                continue
            orbit = []
            x = j
            while not seen[x]:
                seen[x] = True
                orbit.append(x)
                x = x * ell % m
            if len(orbit) == p:
                out.append(PeriodicOrbit(ell, p, min(orbit)))
    return out


def _margin(tau: CircleFunction, p: int) -> float:
    # a grid cell per orbit point: interpolation cannot fake a sign beyond this
    return p * tau.lip_bound / tau.n_samples


def birkhoff_extremes(tau: CircleFunction, ell: int = 2, p_max: int = 8) -> Witnesses:
    """Orbits with the largest and smallest Birkhoff average.

    Each is returned only if its sum is strictly signed beyond ``p lip / N``.
    """
    best_pos = best_neg = None
    hi, lo = -np.inf, np.inf
    for orb in periodic_orbits(ell, p_max):
        s = orb.birkhoff_sum(tau)
        avg = s / orb.period
        if avg > hi and s > _margin(tau, orb.period):
            hi, best_pos = avg, orb
        if avg < lo and -s > _margin(tau, orb.period):
            lo, best_neg = avg, orb
    return Witnesses(best_pos, best_neg)


def coboundary_witness(tau: CircleFunction, ell: int = 2, p_max: int = 8) -> CoboundaryVerdict:
    """Certify that ``tau`` is not a coboundary via two oppositely signed orbits."""
    mean = tau.mean()
    if abs(mean) > 1e-12:
        warnings.warn(f"subtracting mean {mean:.3g} before the orbit test")
        tau = add_constant(tau, -mean)
    pos, neg = birkhoff_extremes(tau, ell, p_max)
    if pos is None or neg is None:
        return CoboundaryVerdict("Inconclusive")
    return CoboundaryVerdict("NotCoboundary", pos, neg, pos.birkhoff_sum(tau), neg.birkhoff_sum(tau))
