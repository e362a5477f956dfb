"""Lipschitz functions on the circle R/Z.

A :class:`CircleFunction` stores values on the uniform grid ``i/N`` together
with an optional exact evaluator, either a trigonometric polynomial or an
analytic callable.  Grid values are the primary data; the exact form is used
whenever a value off the grid is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

TWO_PI = 2.0 * np.pi
DEFAULT_GRID = 4096

# elements per chunk when summing trig series directly
_CHUNK = 1 << 21


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """``constant + sum_k cos_k cos(2 pi k x) + sin_k sin(2 pi k x)``."""

    constant: float
    ks: np.ndarray
    cos: np.ndarray
    sin: np.ndarray

    @classmethod
    def from_terms(cls, terms: Iterable[Sequence[float]], constant: float = 0.0) -> "TrigPoly":
        acc: dict[int, list[float]] = {}
        for term in terms:
            k, a, b = int(term[0]), float(term[1]), float(term[2])
            if k < 1:
                raise ValueError(f"frequencies must be positive, got {k}")
            slot = acc.setdefault(k, [0.0, 0.0])
            slot[0] += a
            slot[1] += b
        ks = np.array(sorted(acc), dtype=np.int64)
        cos = np.array([acc[k][0] for k in ks], dtype=float)
        sin = np.array([acc[k][1] for k in ks], dtype=float)
        return cls(float(constant), ks, cos, sin)

    @classmethod
    def from_coefficients(cls, coeffs: np.ndarray, drop: float = 0.0) -> "TrigPoly":
        """Build from complex coefficients ``c[k]`` for ``k = 0..K``.

        The real function is ``sum_k c_k e(kx) + conj``; ``c[0]`` is the mean.
        """
        coeffs = np.asarray(coeffs, dtype=complex)
        ks = np.arange(1, coeffs.size)
        c = coeffs[1:]
        keep = np.abs(c) > drop
        return cls(float(coeffs[0].real), ks[keep].astype(np.int64),
                   2.0 * c[keep].real, -2.0 * c[keep].imag)

    @property
    def degree(self) -> int:
        nz = (self.cos != 0) | (self.sin != 0)
        return int(self.ks[nz].max()) if nz.any() else 0

    def terms(self) -> list[tuple[int, float, float]]:
        return [(int(k), float(a), float(b)) for k, a, b in zip(self.ks, self.cos, self.sin)]

    def coefficient(self, k: int) -> complex:
        """Fourier coefficient at integer frequency ``k`` (any sign)."""
        if k == 0:
            return complex(self.constant)
        idx = np.nonzero(self.ks == abs(k))[0]
        if idx.size == 0:
            return 0j
        a, b = self.cos[idx[0]], self.sin[idx[0]]
        c = complex(a, -b) / 2.0
        return c if k > 0 else c.conjugate()

    def coefficients(self, k_max: int) -> np.ndarray:
        """Complex coefficients for frequencies ``0..k_max``."""
        out = np.zeros(k_max + 1, dtype=complex)
        out[0] = self.constant
        sel = self.ks <= k_max
        out[self.ks[sel]] = (self.cos[sel] - 1j * self.sin[sel]) / 2.0
        return out

    def lipschitz(self) -> float:
        return float(TWO_PI * np.sum(self.ks * (np.abs(self.cos) + np.abs(self.sin))))

    def __call__(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        flat = theta.ravel()
        out = np.full(flat.shape, self.constant)
        if self.ks.size:
            step = max(1, _CHUNK // self.ks.size)
            for lo in range(0, flat.size, step):
                phase = TWO_PI * np.outer(np.mod(flat[lo:lo + step], 1.0), self.ks)
                out[lo:lo + step] += np.cos(phase) @ self.cos + np.sin(phase) @ self.sin
        return out.reshape(theta.shape)

    def on_grid(self, n: int) -> np.ndarray:
        if 2 * self.degree + 2 <= n:
            spec = np.zeros(n // 2 + 1, dtype=complex)
            spec[0] = n * self.constant
            spec[self.ks] = n * (self.cos - 1j * self.sin) / 2.0
            return np.fft.irfft(spec, n)
        return self(np.arange(n) / n)

    def scaled(self, alpha: float) -> "TrigPoly":
        return TrigPoly(alpha * self.constant, self.ks, alpha * self.cos, alpha * self.sin)

    def plus(self, other: "TrigPoly", beta: float = 1.0) -> "TrigPoly":
        terms = self.terms() + [(k, beta * a, beta * b) for k, a, b in other.terms()]
        return TrigPoly.from_terms(terms, self.constant + beta * other.constant)

    def dilated(self, ell: int) -> "TrigPoly":
        """``x -> p(ell * x)``."""
        return TrigPoly(self.constant, self.ks * ell, self.cos.copy(), self.sin.copy())


@dataclass(frozen=True, eq=False)
class CircleFunction:
    """Real function on R/Z sampled at ``i/N``.

    Parameters
    ----------
    samples : ndarray
        Values at ``theta = i/N``.
    lip_bound : float
        Upper bound on the Lipschitz constant.
    closed_form : TrigPoly, optional
        Exact trigonometric form.
    func : callable, optional
        Exact vectorised evaluator used when there is no trig form.
    """

    samples: np.ndarray
    lip_bound: float
    closed_form: Optional[TrigPoly] = None
    func: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("need at least two samples")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "lip_bound", float(self.lip_bound))

    @property
    def n_samples(self) -> int:
        return self.samples.size

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.n_samples) / self.n_samples

    @property
    def exact(self) -> Optional[Callable]:
        if self.closed_form is not None:
            return self.closed_form
        return self.func

    def __call__(self, theta):
        return evaluate(self, theta)

    def mean(self) -> float:
        if self.closed_form is not None:
            return self.closed_form.constant
        return float(self.samples.mean())

    def discrete_lipschitz(self) -> float:
        return discrete_lipschitz(self.samples)


@dataclass(frozen=True, eq=False)
class FourierSpectrum:
    """Coefficients ``c[k]`` for ``-k_max <= k <= k_max``."""

    k_max: int
    values: np.ndarray

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.k_max:
            raise IndexError(k)
        return complex(self.values[k + self.k_max])

    @property
    def nonnegative(self) -> np.ndarray:
        return self.values[self.k_max:]


def discrete_lipschitz(samples: np.ndarray) -> float:
    samples = np.asarray(samples, dtype=float)
    return float(samples.size * np.max(np.abs(np.roll(samples, -1) - samples)))


def from_trig_poly(terms, constant: float = 0.0, n_samples: int = DEFAULT_GRID) -> CircleFunction:
    """Sample a trigonometric polynomial.

    ``terms`` is a sequence of ``(k, cos_coeff, sin_coeff)``.  The grid must
    resolve the highest frequency: ``n_samples >= 2 k_max + 2``.
    """
    poly = terms if isinstance(terms, TrigPoly) else TrigPoly.from_terms(terms, constant)
    if n_samples < 2 * poly.degree + 2:
        raise ValueError(
            f"grid of {n_samples} points cannot resolve frequency {poly.degree}")
    return _from_poly(poly, n_samples)


def _from_poly(poly: TrigPoly, n: int) -> CircleFunction:
    return CircleFunction(poly.on_grid(n), poly.lipschitz(), closed_form=poly)


def from_samples(values, lip_bound: Optional[float] = None) -> CircleFunction:
    """Piecewise-linear function through ``values``.

    The Lipschitz constant of the interpolant is exactly ``N max|diff|``.
    """
    values = np.asarray(values, dtype=float)
    lip = discrete_lipschitz(values) if lip_bound is None else lip_bound
    return CircleFunction(values, lip)


def from_callable(func, n_samples: int, lip_bound: float) -> CircleFunction:
    grid = np.arange(n_samples) / n_samples
    return CircleFunction(np.asarray(func(grid), dtype=float), lip_bound, func=func)


def constant(c: float, n_samples: int = DEFAULT_GRID) -> CircleFunction:
    return _from_poly(TrigPoly.from_terms([], c), n_samples)


def zero(n_samples: int = DEFAULT_GRID) -> CircleFunction:
    return constant(0.0, n_samples)


def interpolate(samples: np.ndarray, theta) -> np.ndarray:
    """Periodic linear interpolation of grid values."""
    n = samples.size
    x = np.mod(np.asarray(theta, dtype=float), 1.0) * n
    i0 = np.floor(x).astype(np.int64)
    w = x - i0
    i0 %= n
    return samples[i0] * (1.0 - w) + samples[(i0 + 1) % n] * w


def evaluate(f: CircleFunction, theta):
    """Value of ``f`` at ``theta`` (scalar or array, taken mod 1)."""
    exact = f.exact
    out = exact(np.asarray(theta, dtype=float)) if exact is not None else interpolate(f.samples, theta)
    return float(out) if np.ndim(out) == 0 else out


def fourier(f: CircleFunction, k_max: int) -> FourierSpectrum:
    """Fourier coefficients ``int f(x) e^{-2 pi i k x} dx`` for ``|k| <= k_max``.

    Exact for trig polynomials; otherwise the DFT of the samples divided by N,
    which needs ``k_max < N/2``.
    """
    if f.closed_form is not None:
        pos = f.closed_form.coefficients(k_max)
    else:
        n = f.n_samples
        if not 2 * k_max < n:
            raise ValueError(f"k_max={k_max} too large for a grid of {n} points")
        pos = np.fft.fft(f.samples)[:k_max + 1] / n
    full = np.concatenate([np.conj(pos[:0:-1]), pos])
    return FourierSpectrum(k_max, full)


def spectrum_array(f: CircleFunction, k_max: int) -> np.ndarray:
    """Nonnegative-frequency coefficients ``c[0..k_max]``."""
    return fourier(f, k_max).nonnegative


def extrema(f: CircleFunction, refine: int = 8) -> tuple[float, float, float]:
    """Return ``(min, max, sup_norm)``.

    Grid extrema are refined inside the neighbouring cells when an exact
    evaluator is available; for sampled functions the grid extrema are the
    extrema of the interpolant.
    """
    # instances are immutable, so the refined result is memoised on them
    cache = f.__dict__.setdefault("_extrema_cache", {})
    if refine not in cache:
        cache[refine] = _extrema(f, refine)
    return cache[refine]


def _extrema(f: CircleFunction, refine: int) -> tuple[float, float, float]:
    s = f.samples
    lo, hi = float(s.min()), float(s.max())
    exact = f.exact
    if exact is not None and f.lip_bound > 0:
        n = f.n_samples
        h = 1.0 / n
        for sign in (1.0, -1.0):
            order = np.argsort(sign * s)[:refine]
            for i in order:
                res = minimize_scalar(lambda x: sign * float(exact(np.array(x))),
                                      bounds=(i * h - h, i * h + h), method="bounded",
                                      options={"xatol": 1e-12})
                val = sign * res.fun
                if sign > 0:
                    lo = min(lo, val)
                else:
                    hi = max(hi, val)
    return lo, hi, max(abs(lo), abs(hi))


def sup_norm(f: CircleFunction) -> float:
    return extrema(f)[2]


def linear_combination(f: CircleFunction, g: CircleFunction, alpha: float = 1.0,
                       beta: float = 1.0) -> CircleFunction:
    """``alpha f + beta g`` on a common grid."""
    if f.n_samples != g.n_samples:
        raise ValueError("grids differ")
    lip = abs(alpha) * f.lip_bound + abs(beta) * g.lip_bound
    if f.closed_form is not None and g.closed_form is not None:
        poly = f.closed_form.scaled(alpha).plus(g.closed_form, beta)
        return CircleFunction(alpha * f.samples + beta * g.samples, lip, closed_form=poly)
    fe, ge = f.exact, g.exact
    func = None
    if fe is not None and ge is not None:
        def func(x, fe=fe, ge=ge):
            return alpha * fe(x) + beta * ge(x)
    return CircleFunction(alpha * f.samples + beta * g.samples, lip, func=func)


def add_constant(f: CircleFunction, c: float) -> CircleFunction:
    return linear_combination(f, constant(c, f.n_samples))


def compose_power(f: CircleFunction, ell: int) -> CircleFunction:
    """``theta -> f(ell * theta)``; grid values are reused exactly."""
    n = f.n_samples
    samples = f.samples[(ell * np.arange(n)) % n]
    lip = ell * f.lip_bound
    if f.closed_form is not None:
        return CircleFunction(samples, lip, closed_form=f.closed_form.dilated(ell))
    func = None
    if f.func is not None:
        def func(x, inner=f.func):
            return inner(ell * np.asarray(x))
    return CircleFunction(samples, lip, func=func)


def resample(f: CircleFunction, n_samples: int) -> CircleFunction:
    """Same function on another grid."""
    if f.closed_form is not None:
        return _from_poly(f.closed_form, n_samples)
    grid = np.arange(n_samples) / n_samples
    if f.func is not None:
        return CircleFunction(f.func(grid), f.lip_bound, func=f.func)
    return CircleFunction(interpolate(f.samples, grid), f.lip_bound)
