import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solenoid.affine import (ConvergenceError, Itinerary, SkewParams, apply, boundary_fixed_point,
                             boundary_operator, depth_for, dist_lambda, in_band, preimages,
                             sample_attractor, t_lambda, trapping_radius)
from solenoid.circle import from_samples, from_trig_poly, zero
from solenoid.cohomology import apply_L

COS = from_trig_poly([(1, 1.0, 0.0)])


def _brute_upper(lam, tau_fn, theta, depth):
    """Max over all 2^depth backward branches of the truncated series."""
    thetas = np.array([theta])
    vals = np.zeros(1)
    for k in range(depth):
        thetas = np.concatenate([thetas / 2, (thetas + 1) / 2])
        vals = np.concatenate([vals, vals]) + lam ** k * tau_fn(thetas)
    return vals.max()


class TestApply:
    def test_zero_fibre(self):
        assert apply(SkewParams(2, 0.5, zero()), 0.3, 1.0) == pytest.approx((0.6, 0.5))

    def test_cosine_at_fixed_point(self):
        assert apply(SkewParams(2, 0.9, COS), 0.0, 0.0) == pytest.approx((0.0, 1.0))

    def test_degree_three(self):
        th, t = apply(SkewParams(3, 0.5, COS), 1 / 3, 2.0)
        assert min(th, 1 - th) < 1e-12 and t == pytest.approx(0.5)


class TestTrapping:
    def test_values(self):
        assert trapping_radius(zero(), 0.5) == 1.0
        assert trapping_radius(COS, 0.9) == pytest.approx(10.5)
        assert trapping_radius(COS, 0.5) == pytest.approx(2.1)

    def test_rejects_non_trapping_strip(self):
        with pytest.raises(ValueError):
            SkewParams(2, 0.5, COS, t0=2.0)
        SkewParams(2, 0.5, COS, t0=2.01)

    @pytest.mark.parametrize("ell,lam", [(1, 0.5), (2, 0.0), (2, 1.0), (2.5, 0.5)])
    def test_rejects_bad_parameters(self, ell, lam):
        with pytest.raises(ValueError):
            SkewParams(ell, lam, COS)


class TestPreimages:
    def test_values(self):
        assert preimages(2, 0.0) == pytest.approx([0.0, 0.5])
        assert preimages(2, 0.5) == pytest.approx([0.25, 0.75])
        assert preimages(3, 0.6) == pytest.approx([0.2, 1.6 / 3, 2.6 / 3])

    @given(st.integers(2, 6), st.floats(0, 1, exclude_max=True))
    def test_all_map_back(self, ell, theta):
        pre = preimages(ell, theta)
        back = np.mod(ell * pre, 1.0)
        assert np.all(np.minimum(np.abs(back - theta), 1 - np.abs(back - theta)) < 1e-12)


class TestBoundaries:
    def test_zero_fibre(self):
        b = boundary_fixed_point(SkewParams(2, 0.5, zero()), tol=1e-6)
        assert np.max(np.abs(b.rho_plus.samples)) < 1e-6
        assert np.max(np.abs(b.rho_minus.samples)) < 1e-6

    def test_jordan_case(self):
        mu = COS
        b = boundary_fixed_point(SkewParams(2, 0.5, apply_L(0.5, mu)), tol=1e-6)
        assert np.max(np.abs(b.rho_plus.samples - mu.samples)) < 1e-5
        assert np.max(np.abs(b.rho_minus.samples - mu.samples)) < 1e-5

    def test_geometric_series_at_fixed_point(self):
        b = boundary_fixed_point(SkewParams(2, 0.9, COS), tol=1e-6)
        assert b.rho_plus.samples[0] == pytest.approx(10.0, abs=1e-4)

    def test_matches_brute_force_branch_search(self):
        # independent oracle: enumerate every backward branch to depth 16
        lam = 0.3
        p = SkewParams(2, lam, COS)
        b = boundary_fixed_point(p, n=1024, tol=1e-9)
        tail = lam ** 16 / (1 - lam)
        for theta in (0.0, 0.125, 0.3, 0.71):
            ref = _brute_upper(lam, COS, theta, 16)
            got = np.interp(theta, np.arange(1025) / 1024, np.append(b.rho_plus.samples, b.rho_plus.samples[0]))
            assert abs(got - ref) < tail + COS.lip_bound / 1024 * lam / (2 - lam) + 1e-6

    def test_ordering_and_bounds(self):
        p = SkewParams(2, 0.8, from_trig_poly([(1, 0.3, 1.0), (3, 0.5, 0.0)]))
        b = boundary_fixed_point(p)
        assert np.all(b.rho_minus.samples <= b.rho_plus.samples + 1e-12)
        assert np.max(np.abs(b.rho_plus.samples)) <= p.t0
        assert b.residual <= b.tol

    def test_lipschitz_of_boundaries(self):
        lam, tol = 0.7, 1e-6
        tau = from_trig_poly([(1, 1.0, 0.0), (2, 0.0, 0.4)])
        b = boundary_fixed_point(SkewParams(2, lam, tau), tol=tol)
        bound = tau.lip_bound / (2 - lam) + 2 * tol * b.n_samples
        assert b.rho_plus.discrete_lipschitz() <= bound
        assert b.rho_minus.discrete_lipschitz() <= bound

    def test_monotone_iterates(self):
        p = SkewParams(2, 0.6, COS)
        rho = from_samples(np.full(512, p.t0))
        prev = rho
        for _ in range(5):
            nxt = boundary_operator(p, prev, +1)
            assert np.all(nxt.samples <= prev.samples + 1e-12)
            prev = nxt

    def test_iteration_cap(self, monkeypatch):
        import solenoid.affine as affine
        monkeypatch.setattr(affine, "iteration_cap", lambda lam, tol, t0: 3)
        with pytest.raises(ConvergenceError):
            boundary_fixed_point(SkewParams(2, 0.999, COS), n=64)

    def test_rejects_nonpositive_tol(self):
        with pytest.raises(ValueError):
            boundary_fixed_point(SkewParams(2, 0.5, COS), tol=0.0)

    @given(st.integers(0, 2 ** 31))
    @settings(max_examples=25, deadline=None)
    def test_operator_contracts(self, seed):
        rng = np.random.default_rng(seed)
        lam = float(rng.uniform(0.1, 0.95))
        p = SkewParams(2, lam, COS)
        r1 = from_samples(rng.normal(size=256))
        r2 = from_samples(rng.normal(size=256))
        for sign in (+1, -1):
            d_out = np.max(np.abs(boundary_operator(p, r1, sign).samples - boundary_operator(p, r2, sign).samples))
            assert d_out <= lam * np.max(np.abs(r1.samples - r2.samples)) + 1e-12


class TestSolenoid:
    def test_zero_fibre(self):
        it = Itinerary.from_branches(0.2, [0, 1, 1])
        assert t_lambda(SkewParams(2, 0.5, zero()), it) == (0.0, 0.0)

    def test_constant_itinerary(self):
        it = Itinerary(np.zeros(201))
        value, tail = t_lambda(SkewParams(2, 0.9, COS), it)
        assert value == pytest.approx(10.0, abs=1e-8) and tail < 1e-8

    def test_two_step(self):
        it = Itinerary(np.array([0.0, 0.5, 0.25]))
        value, _ = t_lambda(SkewParams(2, 0.5, COS), it)
        assert value == pytest.approx(-1.0, abs=1e-12)

    def test_itinerary_must_be_backward_orbit(self):
        with pytest.raises(ValueError):
            Itinerary(np.array([0.0, 0.3]))

    def test_distances(self):
        a = Itinerary(np.array([0.0]))
        b = Itinerary(np.array([0.5]))
        assert dist_lambda(a, a, 0.5) == 0.0
        assert dist_lambda(a, b, 0.3) == pytest.approx(0.5)
        c = Itinerary(np.array([0.0, 0.5]))
        d = Itinerary(np.array([0.5, 0.25]))
        assert dist_lambda(c, d, 0.5) == pytest.approx(0.625)
        with pytest.raises(ValueError):
            dist_lambda(a, c, 0.5)

    def test_t_lambda_lipschitz(self):
        rng = np.random.default_rng(7)
        lam = 0.7
        tau = from_trig_poly([(1, 1.0, 0.0), (3, 0.2, 0.1)])
        p = SkewParams(2, lam, tau)
        for _ in range(200):
            a = Itinerary.random(2, 40, rng)
            b = Itinerary.random(2, 40, rng)
            ta, ea = t_lambda(p, a)
            tb, eb = t_lambda(p, b)
            assert abs(ta - tb) <= tau.lip_bound / lam * dist_lambda(a, b, lam) + ea + eb + 1e-12

    def test_sampling_is_deterministic(self):
        p = SkewParams(2, 0.8, COS)
        a = sample_attractor(p, 100, seed=3)
        b = sample_attractor(p, 100, seed=3)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_zero_fibre_samples_on_equator(self):
        _, t = sample_attractor(SkewParams(2, 0.5, zero()), 50)
        assert np.all(t == 0)

    def test_jordan_samples_on_graph(self):
        p = SkewParams(2, 0.5, apply_L(0.5, COS))
        theta, t = sample_attractor(p, 500, seed=1)
        tail = 0.5 ** depth_for(p, 1e-10) * 1.5 / 0.5
        assert np.max(np.abs(t - np.cos(2 * np.pi * theta))) < max(tail, 1e-9)

    def test_samples_in_band_and_forward_invariant(self):
        p = SkewParams(2, 0.9, COS)
        b = boundary_fixed_point(p)
        theta, t = sample_attractor(p, 2000, seed=5)
        assert np.all(in_band(b, theta, t, 1e-3))
        th2, t2 = apply(p, theta, t)
        assert np.all(in_band(b, th2, t2, 1e-3))
