import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solenoid.affine import BoundaryPair, SkewParams, boundary_fixed_point
from solenoid.circle import from_samples, from_trig_poly, linear_combination, constant, zero
from solenoid.cohomology import apply_L
from solenoid.topology import (ANNULUS, JORDAN, NOT_ANNULUS, UNDETERMINED, annulus_margin,
                               classify, contact_set, defect_profile, union_defect)

COS = from_trig_poly([(1, 1.0, 0.0)])


def _solve(tau, lam, ell=2, n=None):
    p = SkewParams(ell, lam, tau)
    return p, boundary_fixed_point(p, n)


def _naive_defect(lo_list, hi_list, bottom, top, steps=20001):
    """Uncovered length by scanning a fine fibre grid."""
    t = np.linspace(bottom, top, steps)
    covered = np.zeros(steps, bool)
    for lo, hi in zip(lo_list, hi_list):
        covered |= (t >= lo) & (t <= hi)
    if covered.all():
        return 0.0
    dt = t[1] - t[0]
    runs, run = [], 0
    for c in covered:
        run = 0 if c else run + 1
        runs.append(run)
    return max(runs) * dt


class TestClassify:
    def test_zero(self):
        p, b = _solve(zero(), 0.5)
        c = classify(p, b)
        assert c.verdict == JORDAN and c.jordan_gap < 1e-5
        assert abs(annulus_margin(p, b)) < 1e-5 and union_defect(p, b) < 1e-5

    def test_jordan_case(self):
        p, b = _solve(apply_L(0.5, COS), 0.5)
        assert classify(p, b).verdict == JORDAN
        assert abs(annulus_margin(p, b)) < 2 * 1e-5

    @pytest.mark.parametrize("lam", [0.3, 0.4, 0.5])
    def test_strong_contraction_never_annulus(self, lam):
        p, b = _solve(COS, lam)
        assert classify(p, b).verdict == NOT_ANNULUS

    def test_annulus(self):
        p, b = _solve(COS, 0.9)
        c = classify(p, b)
        assert c.verdict == ANNULUS and c.annulus_margin > 0
        assert c.union_defect < 1e-5

    def test_rejects_unconverged(self):
        p, b = _solve(COS, 0.9)
        bad = BoundaryPair(b.rho_minus, b.rho_plus, 1.0, b.iterations, b.tol)
        with pytest.raises(ValueError):
            classify(p, bad)

    def test_translation_invariance(self):
        lam = 0.8
        tau = from_trig_poly([(1, 1.0, 0.0), (2, 0.0, 0.3)])
        p1, b1 = _solve(tau, lam)
        p2, b2 = _solve(linear_combination(tau, constant(0.7)), lam)
        c1, c2 = classify(p1, b1), classify(p2, b2)
        assert c1.verdict == c2.verdict
        assert c1.annulus_margin == pytest.approx(c2.annulus_margin, abs=1e-5)
        assert np.allclose(b2.rho_plus.samples - b1.rho_plus.samples, 0.7 / (1 - lam), atol=2e-6)

    @given(st.integers(0, 2 ** 31), st.sampled_from([(2, 0.5), (2, 0.35), (3, 0.3), (3, 1 / 3)]))
    @settings(max_examples=15, deadline=None)
    def test_no_annulus_below_inverse_degree(self, seed, case):
        ell, lam = case
        rng = np.random.default_rng(seed)
        tau = from_trig_poly([(k, rng.normal(), rng.normal()) for k in range(1, 4)], 0.0, 1024)
        p, b = _solve(tau, lam, ell)
        assert classify(p, b).verdict != ANNULUS

    def test_degree_three_can_be_undetermined_or_decided(self):
        p, b = _solve(COS, 0.5, ell=3)
        assert classify(p, b).verdict in (ANNULUS, NOT_ANNULUS, UNDETERMINED)


class TestDefect:
    def test_matches_naive_scan(self):
        p, b = _solve(COS, 0.5, n=256)
        prof = defect_profile(p, b)
        lam = p.lam
        rng = np.random.default_rng(0)
        for i in rng.integers(0, 256, size=10):
            pre = (i / 256 + np.arange(2)) / 2
            lo = lam * np.interp(pre, np.arange(257) / 256, np.append(b.rho_minus.samples, b.rho_minus.samples[0])) + COS(pre)
            hi = lam * np.interp(pre, np.arange(257) / 256, np.append(b.rho_plus.samples, b.rho_plus.samples[0])) + COS(pre)
            ref = _naive_defect(lo, hi, b.rho_minus.samples[i], b.rho_plus.samples[i])
            span = b.rho_plus.samples[i] - b.rho_minus.samples[i]
            assert prof[i] == pytest.approx(ref, abs=2 * span / 20000 + 1e-9)

    def test_positive_when_not_annulus(self):
        p, b = _solve(COS, 0.4)
        assert union_defect(p, b) > 0.1


class TestContact:
    def test_zero_fibre_everywhere(self):
        p, b = _solve(zero(), 0.5, n=128)
        d, k = contact_set(p, b)
        assert d.size == 128 and k.size == 128

    def test_fixed_point_in_contact_set(self):
        p, b = _solve(COS, 0.9)
        d, k = contact_set(p, b)
        assert 0 in d and 0 in k

    def test_jordan_everywhere(self):
        p, b = _solve(apply_L(0.5, COS), 0.5, n=1024)
        d, _ = contact_set(p, b)
        assert d.size == 1024

    def test_image_covers_circle(self):
        p, b = _solve(from_trig_poly([(1, 1.0, 0.0), (3, 0.0, 0.5)]), 0.7, n=1024)
        d, _ = contact_set(p, b)
        image = set((2 * d) % 1024)
        covered = {j for i in image for j in (i - 1, i, i + 1)}
        assert {i % 1024 for i in covered} >= set(range(1024))
