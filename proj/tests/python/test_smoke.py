import math

import numpy as np
import pytest

try:
    import wwbloch as ww
except ImportError:
    import _core as ww


def test_flat_bottom_dispersion():
    assert ww.flat_bottom_reference(0.0, 0, 1.0) == pytest.approx(0.0)
    assert ww.flat_bottom_reference(0.25, 1, 1.0) == pytest.approx(
        0.75 * math.tanh(0.75)
    )


def test_assemble_is_hermitian():
    p = ww.preset_profile("cosx", 0.02)
    G = ww.assemble_G_theta(p, 0.3, 10, order=4)
    assert G.shape == (21, 21)
    assert np.max(np.abs(G - G.conj().T)) < 1e-13


def test_band_gap_matches_first_order_formula():
    p = ww.preset_profile("cosx", 0.01)
    gaps = ww.band_gaps(p, N=12, order=4, n_max=2, theta_points=129)
    target = 0.25 / math.cosh(0.5) ** 2 * 0.01
    assert gaps[0]["width"] == pytest.approx(target, rel=2e-3)
    assert ww.analytic_gap_width("cosx_gap1", 1.0, 0.01) == pytest.approx(
        target
    )


def test_band_sweep_shapes_and_symmetry():
    p = ww.preset_profile("cos2x", 0.03)
    grid, bands = ww.band_sweep(p, N=14, order=2, n_max=3, theta_points=33)
    assert len(grid) == 33
    assert bands.shape == (33, 4)
    assert np.allclose(bands, bands[::-1, :], atol=1e-10)  # even in theta


def test_oracle_consistency():
    p = ww.preset_profile("cosx", 0.02)
    N = 4
    psi = np.exp(-0.5 * np.abs(np.arange(-N, N + 1))).astype(complex)
    out = ww.apply_dno_oracle(p, 0.3, psi, nx=64, nsigma=64, richardson=True)
    G = ww.assemble_G_theta(p, 0.3, N, order=4)
    assert np.linalg.norm(out - G @ psi) / np.linalg.norm(out) < 1e-4


def test_scaling_fit_and_predicate():
    fit = ww.fit_gap_scaling([0.1, 0.05, 0.025], [2e-3, 5e-4, 1.25e-4])
    assert fit["exponent"] == pytest.approx(2.0)
    assert ww.gap_opening_predicate([-2, 2], 2, 1)
    assert not ww.gap_opening_predicate([-2, 2], 3, 4)


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError):
        ww.preset_profile("cos5x", 0.01)
    with pytest.raises(ValueError):
        p = ww.preset_profile("cosx", 0.02)
        ww.band_sweep(p, N=4, order=4, n_max=4)


def test_colliding_pair():
    assert ww.colliding_pair(0.5, 1.0, 4) == (0, 1)
