import numpy as np
import pytest

from solenoid.affine import SkewParams, boundary_fixed_point, sample_attractor
from solenoid.circle import from_trig_poly, interpolate, zero
from solenoid.render import (BAND, POINTS, EmptyInput, blank, draw_band, read_pgm,
                             render_band, render_points, row_of)


def test_row_orientation():
    assert row_of(1.0, 100, 1.0) == 0
    assert row_of(-1.0, 100, 1.0) == 99
    assert row_of(0.0, 100, 1.0) == 50
    assert row_of(5.0, 100, 1.0) == 0


def test_pgm_round_trip():
    img = render_points([0.0, 0.5], [0.9, -0.9], 16, 8, 1.0)
    data = img.to_pgm()
    assert data.startswith(b"P5\n16 8\n255\n")
    assert np.array_equal(read_pgm(data), img.cells)
    with pytest.raises(ValueError):
        read_pgm(b"P2\n1 1\n255\n0")


def test_zero_band_is_middle_line():
    img = render_band(lambda x: 0 * x, lambda x: 0 * x, 64, 101, 1.0)
    rows = np.nonzero(img.cells.any(axis=1))[0]
    assert list(rows) == [50]
    assert np.all(img.cells[50] == BAND)


def test_band_rejects_crossing():
    with pytest.raises(ValueError):
        render_band(lambda x: 0 * x + 0.5, lambda x: 0 * x, 8, 8)


def test_points_errors():
    with pytest.raises(EmptyInput):
        render_points([], [])
    with pytest.raises(ValueError):
        render_points([0.1], [2.0])
    with pytest.raises(ValueError):
        blank(0, 4, 1.0)
    with pytest.raises(ValueError):
        blank(4, 4, 0.0)


def test_samples_land_inside_drawn_band():
    p = SkewParams(2, 0.8, from_trig_poly([(1, 1.0, 0.0)], 0.0, 1024))
    b = boundary_fixed_point(p)
    lo, hi = b.rho_minus.samples, b.rho_plus.samples
    img = draw_band(blank(256, 128, p.t0), lambda x: interpolate(lo, x), lambda x: interpolate(hi, x))
    band = img.cells == BAND
    theta, t = sample_attractor(p, 2000, seed=5)
    cols = np.floor(theta * 256).astype(int)
    rows = row_of(t, 128, p.t0)
    for c, r in zip(cols, rows):
        near = band[max(r - 1, 0): r + 2, max(c - 1, 0): c + 2]
        assert near.any()


def test_deterministic_bytes():
    p = SkewParams(2, 0.6, zero())
    a = render_points(*sample_attractor(p, 100, seed=1), 32, 16, p.t0).to_pgm()
    b = render_points(*sample_attractor(p, 100, seed=1), 32, 16, p.t0).to_pgm()
    assert a == b and POINTS in read_pgm(a)
