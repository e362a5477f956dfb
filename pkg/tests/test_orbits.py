from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solenoid.circle import constant, from_samples, from_trig_poly, zero
from solenoid.cohomology import apply_L
from solenoid.orbits import (PeriodicOrbit, birkhoff_extremes, coboundary_witness,
                             periodic_orbits)

COS = from_trig_poly([(1, 1.0, 0.0)])


def _mobius(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


class TestEnumeration:
    def test_fixed_point(self):
        orbits = periodic_orbits(2, 1)
        assert [o.fractions for o in orbits] == [[Fraction(0)]]

    def test_two_cycle(self):
        orbits = periodic_orbits(2, 2)
        assert orbits[1].fractions == [Fraction(1, 3), Fraction(2, 3)]

    def test_period_four_contains_fifteenths(self):
        sets = [set(o.fractions) for o in periodic_orbits(2, 4) if o.period == 4]
        assert {Fraction(k, 15) for k in (1, 2, 4, 8)} in sets

    @pytest.mark.parametrize("ell,p_max", [(2, 10), (3, 6), (5, 4)])
    def test_point_counts(self, ell, p_max):
        orbits = periodic_orbits(ell, p_max)
        for p in range(1, p_max + 1):
            # points of period dividing p number ell^p - 1 (the slot 1 == 0 is shared)
            pts = sum(o.period for o in orbits if p % o.period == 0)
            assert pts == ell ** p - 1

    @pytest.mark.parametrize("ell,p_max", [(2, 12), (3, 7)])
    def test_least_period_counts_match_necklace_formula(self, ell, p_max):
        orbits = periodic_orbits(ell, p_max)
        for p in range(2, p_max + 1):
            expect = sum(_mobius(p // d) * ell ** d for d in range(1, p + 1) if p % d == 0) // p
            assert sum(o.period == p for o in orbits) == expect

    @given(st.integers(2, 4), st.integers(1, 6))
    @settings(max_examples=30, deadline=None)
    def test_rational_invariance(self, ell, p_max):
        for o in periodic_orbits(ell, p_max):
            x = o.theta0
            assert (ell ** o.period * x - x).denominator == 1
            assert len(set(o.fractions)) == o.period

    def test_overflow_guard(self):
        with pytest.raises(OverflowError):
            periodic_orbits(2, 60)


class TestBirkhoff:
    def test_cosine_witnesses(self):
        pos, neg = birkhoff_extremes(COS, 2, 2)
        assert pos.fractions == [Fraction(0)]
        assert pos.birkhoff_sum(COS) == pytest.approx(1.0)
        assert neg.fractions == [Fraction(1, 3), Fraction(2, 3)]
        assert neg.birkhoff_sum(COS) == pytest.approx(-1.0, abs=1e-10)

    def test_zero(self):
        assert birkhoff_extremes(zero(), 2, 6) == (None, None)

    def test_coboundary_sums_vanish(self):
        tau = apply_L(1.0, from_trig_poly([(1, 0.4, 0.3), (3, 1.0, 0.0)]))
        assert birkhoff_extremes(tau, 2, 8) == (None, None)
        for o in periodic_orbits(2, 8):
            assert abs(o.birkhoff_sum(tau)) < 1e-12

    def test_sampled_coboundary_within_interpolation_margin(self):
        mu = from_trig_poly([(1, 1.0, 0.0)], 0.0, 1024)
        tau = from_samples(apply_L(1.0, mu).samples, apply_L(1.0, mu).lip_bound)
        for o in periodic_orbits(2, 6):
            assert abs(o.birkhoff_sum(tau)) < o.period * 2 * tau.lip_bound / tau.n_samples


class TestWitness:
    def test_cosine(self):
        v = coboundary_witness(COS, 2, 8)
        assert v.kind == "NotCoboundary"
        assert v.positive.theta0 == 0 and v.negative.theta0 == Fraction(1, 3)

    def test_zero(self):
        assert coboundary_witness(zero()).kind == "Inconclusive"

    def test_coboundary(self):
        assert coboundary_witness(apply_L(1.0, COS)).kind == "Inconclusive"

    def test_mean_is_removed_with_warning(self):
        tau = from_trig_poly([(1, 1.0, 0.0)], 0.25)
        with pytest.warns(UserWarning):
            v = coboundary_witness(tau, 2, 4)
        assert v.kind == "NotCoboundary"

    def test_points_from_integers(self):
        o = PeriodicOrbit(2, 4, 1)
        assert np.allclose(o.points, np.array([1, 2, 4, 8]) / 15)
