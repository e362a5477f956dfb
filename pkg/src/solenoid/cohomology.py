"""Twisted cohomological operators ``L_lam mu = mu o m_ell - lam mu``.

Solvability of ``L_lam mu = tau`` decides whether the attractor is the graph
of a continuous function.  In Fourier space the operator couples only the
frequencies ``k, ell k, ell^2 k, ...`` with ``ell`` not dividing ``k``, so
everything here works chain by chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .circle import (CircleFunction, TrigPoly, add_constant, compose_power,
                     linear_combination, spectrum_array, _from_poly)


class NotSolvable(ArithmeticError):
    """``L_lam mu = tau`` has no continuous solution at the working resolution."""

    def __init__(self, message: str, residual: float = math.inf):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class DkTable:
    lam: float
    values: dict
    truncation_n: int
    truncation_error: float


@dataclass(frozen=True, eq=False)
class Decomposition:
    """``tau = L_{lam_1} ... L_{lam_m} residual`` (up to the mean, see notes)."""

    factors: list
    residual: CircleFunction
    residual_irreducible: bool
    ell: int = 2
    notes: str = ""
    mean_shift: float = 0.0

    def reconstruct(self) -> CircleFunction:
        out = self.residual
        for lam in reversed(self.factors):
            out = apply_L(lam, out, self.ell)
        return out


class JordanRoot(NamedTuple):
    lam: float
    mult: int
    g_value: float


def apply_L(lam: float, mu: CircleFunction, ell: int = 2) -> CircleFunction:
    """``theta -> mu(ell theta) - lam mu(theta)``."""
    return linear_combination(compose_power(mu, ell), mu, 1.0, -lam)


def _default_k_max(tau: CircleFunction, ell: int) -> int:
    if tau.closed_form is not None:
        return max(ell * tau.closed_form.degree, 1)
    return tau.n_samples // 2 - 1


def _chains(ell: int, k_max: int, k_ceiling: Optional[int] = None):
    """Chain heads ``k`` (``ell`` not dividing ``k``) and their frequencies."""
    top = k_max if k_ceiling is None else min(k_max, k_ceiling)
    heads = [k for k in range(1, top + 1) if k % ell]
    out = []
    for k in heads:
        q, chain = k, []
        while q <= k_max:
            chain.append(q)
            q *= ell
        out.append((k, chain))
    return out


def _chain_matrix(coeffs: np.ndarray, chains) -> np.ndarray:
    width = max(len(c) for _, c in chains)
    mat = np.zeros((len(chains), width), dtype=complex)
    for row, (_, chain) in enumerate(chains):
        mat[row, :len(chain)] = coeffs[chain]
    return mat


def chain_sums(tau: CircleFunction, lams, ell: int = 2, k_max: Optional[int] = None,
               k_ceiling: int = 64, derivative: int = 0) -> tuple[list[int], np.ndarray]:
    """``S_k(lam) = sum_n lam^n tau_hat(ell^n k)`` for chain heads ``k``.

    Returns the heads and a complex array of shape ``(n_heads, n_lams)``.
    With ``derivative=j`` the ``j``-th derivative in ``lam`` is returned.
    """
    k_max = k_max or _default_k_max(tau, ell)
    coeffs = spectrum_array(tau, k_max)
    chains = _chains(ell, k_max, k_ceiling)
    if not chains:
        return [], np.zeros((0, np.size(lams)), dtype=complex)
    mat = _chain_matrix(coeffs, chains)
    n = np.arange(mat.shape[1])
    falling = np.ones(n.size)
    for i in range(derivative):
        falling *= np.clip(n - i, 0, None)
    expo = np.clip(n - derivative, 0, None)
    powers = falling[:, None] * np.asarray(lams, dtype=float)[None, :] ** expo[:, None]
    return [k for k, _ in chains], mat @ powers


def jordan_indicator(tau: CircleFunction, lams, ell: int = 2, k_max: Optional[int] = None,
                     k_ceiling: int = 64, derivative: int = 0) -> np.ndarray:
    """``g(lam) = max_k 2 |S_k(lam)|``; vanishes exactly where all chains balance."""
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    _, sums = chain_sums(tau, lams, ell, k_max, k_ceiling, derivative)
    if sums.size == 0:
        return np.zeros(lams.size)
    return 2.0 * np.abs(sums).max(axis=0)


def _tail_error(lam: float, k: int, n_last: int, ell: int, lip: float, sup_coeff: float) -> float:
    ratio = lam / ell
    bound = (lip / (2.0 * k)) * ratio ** (n_last + 1) / (1.0 - ratio)
    if lam < 1.0:
        bound = min(bound, lam ** (n_last + 1) * 2.0 * sup_coeff / (1.0 - lam))
    return bound


def dk_table(tau: CircleFunction, lam: float, ell: int = 2, k_max: Optional[int] = None,
             tol: float = 1e-12) -> DkTable:
    """All ``D_k(tau)(lam) = sum_n lam^n (tau_hat(ell^n k) + tau_hat(-ell^n k))``."""
    exact = tau.closed_form is not None
    k_max = k_max or _default_k_max(tau, ell)
    # a trig polynomial has nothing beyond its degree, so its chains are complete
    k_eff = max(k_max, tau.closed_form.degree) if exact else k_max
    coeffs = spectrum_array(tau, k_eff)
    sup_coeff = float(np.abs(coeffs[1:]).max()) if k_eff > 0 else 0.0
    values, n_last, err = {}, 0, 0.0
    for k, chain in _chains(ell, k_eff, k_max):
        weights = lam ** np.arange(len(chain))
        values[k] = float(2.0 * np.dot(weights, coeffs[chain]).real)
        n_last = max(n_last, len(chain) - 1)
        if exact and chain[-1] * ell > tau.closed_form.degree:
            continue
        err = max(err, _tail_error(lam, k, len(chain) - 1, ell, tau.lip_bound, sup_coeff))
    return DkTable(lam, values, n_last, err)


def dk_functional(tau: CircleFunction, lam: float, k: int, ell: int = 2,
                  tol: float = 1e-12, k_max: Optional[int] = None) -> float:
    """Single ``D_k(tau)(lam)`` (real)."""
    if k < 1 or k % ell == 0:
        raise ValueError(f"k={k} must be positive and not divisible by {ell}")
    k_max = max(k, k_max or _default_k_max(tau, ell))
    return dk_table(tau, lam, ell, k_max, tol).values[k]


def _b_coefficients(lam: float, coeffs: np.ndarray, ell: int, lip: float, tol: float):
    """Solution coefficients on every chain plus the divergence check."""
    k_max = coeffs.size - 1
    b = np.zeros(k_max + 1, dtype=complex)
    for _, chain in _chains(ell, k_max):
        c = coeffs[chain]
        # partial sums, tested against the decay ceiling of a Lipschitz solution
        partial = np.cumsum(lam ** np.arange(len(c)) * c)
        with np.errstate(over="ignore"):
            b_partial = -partial / lam ** np.arange(1, len(c) + 1)
        ceiling = 2.0 * lip / (4.0 * np.asarray(chain)) + tol
        bad = np.abs(b_partial) > ceiling
        if bad.any():
            q = chain[int(np.argmax(bad))]
            raise NotSolvable(f"coefficient at frequency {q} exceeds the decay ceiling")
        # tail form: same value when the full chain sum vanishes, and stable
        tail = np.zeros(len(c), dtype=complex)
        for n in range(len(c) - 2, -1, -1):
            tail[n] = c[n + 1] + lam * tail[n + 1]
        b[chain] = tail
    return b


def solve_L(lam: float, tau: CircleFunction, ell: int = 2, k_max: Optional[int] = None,
            tol: float = 1e-6) -> tuple[CircleFunction, float]:
    """Solve ``mu o m_ell - lam mu = tau`` for a trigonometric polynomial ``mu``.

    Parameters
    ----------
    lam : float
        In ``(0, 1]``.  For ``lam = 1`` the mean of ``tau`` must vanish and
        the returned ``mu`` has zero mean.
    tau : CircleFunction
    k_max : int, optional
        Highest frequency used.  Defaults to ``ell * degree`` for trig
        polynomials and ``N/2 - 1`` otherwise.
    tol : float
        Acceptance threshold on the sup-norm residual.

    Returns
    -------
    mu, residual

    Raises
    ------
    NotSolvable
    """
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"lam must lie in (0, 1], got {lam}")
    k_max = k_max or _default_k_max(tau, ell)
    if tau.closed_form is None and not 2 * k_max < tau.n_samples:
        raise ValueError(f"k_max={k_max} too large for a grid of {tau.n_samples} points")
    coeffs = spectrum_array(tau, k_max)
    if lam == 1.0:
        if abs(coeffs[0]) >= tol:
            raise NotSolvable(f"mean {coeffs[0].real:.3g} is not zero")
        b0 = 0.0
    else:
        b0 = coeffs[0].real / (1.0 - lam)
    b = _b_coefficients(lam, coeffs, ell, tau.lip_bound, tol)
    b[0] = b0
    poly = TrigPoly.from_coefficients(b, drop=0.0)
    keep = (poly.cos != 0) | (poly.sin != 0)
    poly = TrigPoly(poly.constant, poly.ks[keep], poly.cos[keep], poly.sin[keep])
    mu = _from_poly(poly, tau.n_samples)
    residual = float(np.max(np.abs(apply_L(lam, mu, ell).samples - tau.samples)))
    if not residual < tol:
        raise NotSolvable(f"residual {residual:.3g} above tol {tol:.3g}", residual)
    return mu, residual


def canonical_representative(tau: CircleFunction, lam: float, ell: int = 2,
                             k_max: Optional[int] = None) -> CircleFunction:
    """Trig polynomial ``tau_c`` on the chain heads with ``tau - tau_c`` solvable.

    The coefficient at head ``k`` is the complex chain sum
    ``sum_n lam^n tau_hat(ell^n k)``; for even ``tau`` this is ``D_k / 2``.
    """
    k_max = k_max or _default_k_max(tau, ell)
    heads, sums = chain_sums(tau, [lam], ell, k_max, k_ceiling=None)
    coeffs = np.zeros(k_max + 1, dtype=complex)
    if heads:
        coeffs[heads] = sums[:, 0]
    poly = TrigPoly.from_coefficients(coeffs, drop=0.0)
    keep = (poly.cos != 0) | (poly.sin != 0)
    poly = TrigPoly(0.0, poly.ks[keep], poly.cos[keep], poly.sin[keep])
    return _from_poly(poly, tau.n_samples)


def coboundary_order_bound(tau: CircleFunction, ell: int = 2, k_max: Optional[int] = None,
                           zero_tol: float = 1e-10) -> Optional[int]:
    """Upper bound on ``m`` with ``L_1^m mu = tau`` solvable.

    Uses the first chain head ``k`` with a nonzero coefficient and the first
    nonzero position ``p`` along its chain.  ``None`` means unbounded (the
    function is numerically constant).
    """
    k_max = k_max or _default_k_max(tau, ell)
    coeffs = spectrum_array(tau, k_max * ell)
    for k, chain in _chains(ell, k_max):
        mags = np.abs(coeffs[chain])
        nz = np.nonzero(mags > zero_tol)[0]
        if nz.size == 0:
            continue
        p = int(nz[0])
        q = k * ell ** (p + 1)
        nxt = abs(coeffs[q]) if q < coeffs.size else 0.0
        bound = (tau.lip_bound + 4 * q * nxt) / (4 * q * mags[p])
        return int(math.floor(bound))
    return None


def _is_constant(tau: CircleFunction, tol: float) -> bool:
    return float(np.ptp(tau.samples)) < tol and (tau.closed_form is None or tau.closed_form.degree == 0)


def _peel(lam: float, tau: CircleFunction, ell: int, k_max, tol: float, cap: int):
    """Solve repeatedly at ``lam``; return the count and the last solution."""
    count, current = 0, tau
    while count < cap:
        try:
            target = add_constant(current, -current.mean()) if lam == 1.0 else current
            current, _ = solve_L(lam, target, ell, k_max, tol)
        except NotSolvable:
            break
        count += 1
    return count, current


def _refine_multiple(lam: float, tau: CircleFunction, ell: int, k_max, tol: float,
                     cap: int, k_ceiling: int, width: float):
    """Sharpen a root and its multiplicity.

    The indicator is flat near a root of multiplicity ``m``, so the direct
    minimiser is only accurate to about ``eps**(1/m)`` and peeling there can
    stop early.  A root of multiplicity ``m + 1`` is a simple root of the
    ``m``-th derivative of every chain sum, which locates it sharply.
    """

    def argmin(order):
        res = minimize_scalar(
            lambda x: float(jordan_indicator(tau, [x], ell, k_max, k_ceiling, order)[0]),
            bounds=(max(lam - width, 1e-9), min(lam + width, 1.0)), method="bounded",
            options={"xatol": 1e-14})
        return float(res.x)

    mult, _ = _peel(lam, tau, ell, k_max, tol, cap)
    while 0 < mult < cap:
        new = argmin(mult)
        new_mult, _ = _peel(new, tau, ell, k_max, tol, cap)
        if new_mult <= mult:
            break
        lam, mult = new, new_mult
    if mult > 1:
        new = argmin(mult - 1)
        if _peel(new, tau, ell, k_max, tol, cap)[0] == mult:
            lam = new
    return lam, mult


def scan_jordan(tau: CircleFunction, ell: int = 2, lam_range=(0.005, 1.0, 400),
                tol: float = 1e-6, k_ceiling: int = 64,
                k_max: Optional[int] = None) -> list[JordanRoot]:
    """Values of ``lam`` at which ``tau`` lies in the image of ``L_lam``.

    The indicator :func:`jordan_indicator` is evaluated on an even grid; each
    local minimum is refined by a bounded scalar minimisation, accepted only
    if :func:`solve_L` succeeds there, and its multiplicity is counted by
    repeated solving.  ``lam = 1`` is tested directly on ``tau - mean``.
    """
    lo, hi, n = lam_range
    tau0 = add_constant(tau, -tau.mean())
    if _is_constant(tau0, tol):
        return []
    include_one = hi >= 1.0
    grid = np.linspace(lo, min(hi, 1.0), int(n))
    g = jordan_indicator(tau0, grid, ell, k_max, k_ceiling)
    order_cap = (coboundary_order_bound(tau0, ell) or 0) + 8

    def g_at(x):
        return float(jordan_indicator(tau0, [x], ell, k_max, k_ceiling)[0])

    found: list[JordanRoot] = []
    for i in range(1, grid.size - 1):
        if not (g[i] <= g[i - 1] and g[i] <= g[i + 1]):
            continue
        if include_one and grid[i + 1] >= 1.0:
            continue
        res = minimize_scalar(g_at, bounds=(grid[i - 1], grid[i + 1]), method="bounded",
                              options={"xatol": 1e-12})
        lam = float(res.x)
        if any(abs(lam - r.lam) < 1e-3 for r in found):
            continue
        lam, mult = _refine_multiple(lam, tau0, ell, k_max, tol, order_cap, k_ceiling,
                                     grid[1] - grid[0])
        if mult:
            found.append(JordanRoot(lam, mult, float(res.fun)))
    if include_one:
        mult, _ = _peel(1.0, tau0, ell, k_max, tol, order_cap)
        if mult:
            found.append(JordanRoot(1.0, mult, g_at(1.0)))
    return sorted(found, key=lambda r: r.lam)


def decompose(tau: CircleFunction, ell: int = 2, tol: float = 1e-6,
              lam_range=(0.005, 1.0, 400), k_max: Optional[int] = None) -> Decomposition:
    """Peel every ``L_lam`` factor off ``tau``.

    Factors are removed in descending order of ``lam``.  The mean of ``tau`` is
    carried by the residual when every factor is below 1; with a factor
    ``lam = 1`` only ``tau - mean`` is reproduced and ``mean_shift`` records
    the difference.
    """
    if _is_constant(tau, tol):
        return Decomposition([], tau, True, ell)
    mean = tau.mean()
    current = add_constant(tau, -mean)
    roots = scan_jordan(current, ell, lam_range, tol, k_max=k_max)
    factors = []
    for root in sorted(roots, key=lambda r: -r.lam):
        for _ in range(root.mult):
            try:
                current, _ = solve_L(root.lam, current, ell, k_max, tol)
            except NotSolvable:
                break
            factors.append(root.lam)
    notes, shift = "", 0.0
    if mean != 0.0:
        if factors and max(factors) == 1.0:
            shift = mean
            notes = "mean not reproducible through L_1; residual reproduces tau - mean"
        else:
            current = add_constant(current, mean / float(np.prod([1.0 - x for x in factors])))
    irreducible = not scan_jordan(current, ell, lam_range, tol, k_max=k_max)
    return Decomposition(factors, current, irreducible, ell, notes, shift)
