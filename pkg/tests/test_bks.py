import numpy as np
import pytest

from geoquant.config import DEFAULT_TOLERANCES
from geoquant.errors import (QuadratureFailure, SupportEscapesGrid,
                             UnsupportedObservable)
from geoquant.bks import (PolarizedState, bks_pairing, fourier_project,
                          fourier_project_back, gaussian_state,
                          richardson_extrapolate, windowed_plane_wave)
from geoquant.bks import _phase_panels
from geoquant.halfform import ConfigGrid

TOL = DEFAULT_TOLERANCES


def line(count=256, extent=12.0):
    return ConfigGrid.line(-extent, extent, count)


def raw_gaussian(grid, width=1.0, center=0.0, k=0.0, polarization="momentum",
                 hbar=1.0):
    x = grid.axis(0)
    samples = np.exp(-((x - center) ** 2) / (2 * width**2) + 1j * k * x)
    return PolarizedState(samples, grid, polarization, hbar)


# -- Fourier projection ---------------------------------------------------------

def test_gaussian_maps_to_gaussian_same_width():
    grid = line()
    phi = raw_gaussian(grid, width=1.0)  # width sqrt(hbar) in these units
    psi = fourier_project(phi)
    expected = np.exp(-psi.grid.axis(0) ** 2 / 2.0)
    err = np.sqrt(np.sum(np.abs(psi.samples - expected) ** 2)
                  * psi.grid.cell_volume)
    assert err < TOL.grid


def test_projection_is_linear_and_kills_zero():
    grid = line()
    zero = PolarizedState(np.zeros(grid.size), grid, "momentum")
    assert not np.any(fourier_project(zero).samples)


def test_translated_gaussian_peaks_at_minus_offset():
    grid = line(count=512, extent=16.0)
    q0 = 2.5
    phi = raw_gaussian(grid, width=1.0, k=q0)  # e^{-p^2/2 hbar + i p q0 / hbar}
    psi = fourier_project(phi)
    peak = psi.grid.axis(0)[int(np.argmax(np.abs(psi.samples)))]
    assert abs(abs(peak) - q0) < 2 * psi.grid.spacings[0]


def test_parseval_on_random_band_limited_states():
    grid = line(count=384, extent=14.0)
    rng = np.random.default_rng(1)
    for _ in range(5):
        parts = [raw_gaussian(grid, width=rng.uniform(0.8, 1.5),
                              center=rng.uniform(-2, 2),
                              k=rng.uniform(-2, 2)).samples
                 for _ in range(3)]
        state = PolarizedState(sum(parts), grid, "momentum").normalized()
        assert abs(fourier_project(state).norm() - 1.0) < 1e-8


def test_inverse_sign_twin_round_trip():
    grid = line(count=384, extent=14.0)
    rng = np.random.default_rng(5)
    parts = [raw_gaussian(grid, width=rng.uniform(0.9, 1.4),
                          center=rng.uniform(-1.5, 1.5),
                          k=rng.uniform(-2, 2)).samples for _ in range(3)]
    state = PolarizedState(sum(parts), grid, "momentum").normalized()
    back = fourier_project_back(fourier_project(state))
    err = np.sqrt(np.sum(np.abs(back.samples - state.samples) ** 2)
                  * grid.cell_volume)
    assert err < 1e-8


def test_projection_rejects_boundary_support():
    grid = line(count=128, extent=3.0)
    wide = raw_gaussian(grid, width=4.0)
    with pytest.raises(SupportEscapesGrid):
        fourier_project(wide)


def test_projection_rejects_wrong_polarization():
    grid = line()
    psi = raw_gaussian(grid, polarization="position")
    with pytest.raises(ValueError):
        fourier_project(psi)


# -- pairing ---------------------------------------------------------------------

def gaussian_pairing_oracle(s, r, b, t, hbar=1.0, m=1.0):
    """Closed form of the free pairing for exp(-q^2/2s^2), exp(-(q-b)^2/2r^2)."""
    a = m / (2 * hbar * t)
    beta = 1 / (2 * s**2) - 1j * a
    c1 = 1 / (2 * s**2) - 1 / (4 * beta * s**4)
    c2 = c1 + 1 / (2 * r**2)
    return (np.sqrt(m / (2 * np.pi * hbar * t)) * np.sqrt(np.pi / beta)
            * np.sqrt(np.pi / c2) * np.exp(b * b / (4 * c2 * r**4)
                                           - b * b / (2 * r**2)))


def test_pairing_matches_gaussian_oracle():
    grid = line(count=512, extent=16.0)
    s, r, b = 1.0, 1.3, 0.8
    psi = PolarizedState(np.exp(-grid.axis(0) ** 2 / (2 * s**2)), grid, "position")
    chi = PolarizedState(np.exp(-(grid.axis(0) - b) ** 2 / (2 * r**2)),
                         grid, "position")
    for t in (0.4, 0.1, 0.025):
        res = bks_pairing(psi, chi, t)
        oracle = gaussian_pairing_oracle(s, r, b, t)
        assert abs(res.value - oracle) / abs(oracle) < 1e-8
        assert res.half_form_factor == pytest.approx(
            np.sqrt(t / (2 * np.pi)), rel=1e-12)


def test_pairing_oracle_with_mass_and_hbar():
    grid = line(count=512, extent=16.0)
    hbar, mass = 0.5, 2.0
    psi = PolarizedState(np.exp(-grid.axis(0) ** 2 / 2), grid, "position",
                         hbar=hbar, mass=mass)
    chi = PolarizedState(np.exp(-grid.axis(0) ** 2 / 2), grid, "position",
                         hbar=hbar, mass=mass)
    res = bks_pairing(psi, chi, 0.1)
    oracle = gaussian_pairing_oracle(1.0, 1.0, 0.0, 0.1, hbar=hbar, m=mass)
    assert abs(res.value - oracle) / abs(oracle) < 1e-8


def test_pairing_small_time_limit_carries_fresnel_branch():
    """P(t) -> e^{i pi/4} <psi, chi> + O(t); the branch factor is reported."""
    grid = line(count=512, extent=16.0)
    psi = gaussian_state(grid, width=1.0)
    chi = gaussian_state(grid, width=1.2, center=0.5)
    inner = psi.inner(chi)
    ts = np.array([0.16, 0.08, 0.04, 0.02])
    values = np.array([bks_pairing(psi, chi, float(t)).value for t in ts])
    branch = bks_pairing(psi, chi, 0.1).fresnel_phase
    assert branch == pytest.approx(np.exp(1j * np.pi / 4))
    limit, _ = richardson_extrapolate(ts, values)
    assert abs(limit / branch - inner) < 1e-6
    # first-order (odd in p) term is absent: deviations shrink linearly
    devs = np.abs(values / branch - inner)
    ratios = devs[:-1] / devs[1:]
    assert np.all(ratios > 1.8)


def test_pairing_zero_state_gives_zero():
    grid = line()
    psi = gaussian_state(grid)
    zero = PolarizedState(np.zeros(grid.size), grid, "position")
    assert bks_pairing(psi, zero, 0.1).value == 0


def test_pairing_is_bilinear():
    grid = line(count=384)
    psi1 = gaussian_state(grid, width=1.0)
    psi2 = gaussian_state(grid, width=1.3, center=0.6)
    chi = gaussian_state(grid, width=0.9, center=-0.4)
    a, b = 0.7 - 0.2j, 1.1 + 0.5j
    combo = PolarizedState(a * psi1.samples + b * psi2.samples, grid, "position")
    t = 0.08
    lhs = bks_pairing(combo, chi, t).value
    rhs = (np.conj(a) * bks_pairing(psi1, chi, t).value
           + np.conj(b) * bks_pairing(psi2, chi, t).value)
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))


def test_disjoint_supports_pair_to_nothing():
    grid = line(count=512, extent=20.0)
    x = grid.axis(0)
    psi = PolarizedState(np.exp(-((x + 12) ** 2) / 0.5), grid, "position")
    chi = PolarizedState(np.exp(-((x - 12) ** 2) / 0.5), grid, "position")
    t = 0.05  # flow reach t*p/m stays far below the 24 separation
    res = bks_pairing(psi, chi, t)
    assert abs(res.value) < TOL.bks * psi.norm() * chi.norm()


def test_quadrature_guard_raises_on_coarse_panels():
    grid = line(count=512, extent=16.0)
    psi = gaussian_state(grid, width=1.0)
    chi = gaussian_state(grid, width=1.0)
    with pytest.raises(QuadratureFailure):
        bks_pairing(psi, chi, 0.02, theta_max=600 * np.pi, h_max=40.0)


def test_pairing_rejects_dimension_two():
    grid = ConfigGrid((-4.0, -4.0), (4.0, 4.0), (32, 32))
    psi = PolarizedState(np.ones(grid.shape), grid, "position")
    with pytest.raises(UnsupportedObservable):
        bks_pairing(psi, psi, 0.1)


def test_phase_panel_rule_integrates_quadratic_phase():
    # Integral of e^{i a y^2} over [-Y, Y] against the erf closed form
    from scipy.special import erf
    a, y_max = 18.0, 6.0
    nodes, weights = _phase_panels(-y_max, y_max, a, 1.5 * np.pi, 1.0)
    approx = np.sum(weights * np.exp(1j * a * nodes**2))
    root = np.sqrt(-1j * a)  # principal branch
    exact = np.sqrt(np.pi) * erf(root * y_max) / root
    assert abs(approx - exact) < 1e-12
    # antisymmetric integrands cancel to round-off
    odd = np.sum(weights * nodes * np.exp(1j * a * nodes**2)
                 * np.exp(-nodes**2 / 4))
    assert abs(odd) < 1e-13


def test_richardson_recovers_polynomials_exactly():
    ts = np.array([0.8, 0.4, 0.2, 0.1, 0.05])
    vals = 3.0 - 2.0 * ts + 0.7 * ts**2 - 0.1 * ts**3
    value, spread = richardson_extrapolate(ts, vals)
    assert value == pytest.approx(3.0, abs=1e-12)
    assert spread < 1e-10


def test_richardson_on_analytic_function():
    ts = np.array([0.64, 0.32, 0.16, 0.08, 0.04, 0.02])
    f = lambda t: np.sqrt(2 * np.pi / (t - 2j))
    g = (f(ts) - f(0.0)) / ts
    exact = -np.sqrt(2 * np.pi) / 2 * (-2j) ** -1.5
    value, spread = richardson_extrapolate(ts, g)
    assert abs(value - exact) < 1e-8
    assert spread < 1e-5


def test_windowed_plane_wave_properties():
    grid = line(count=640, extent=40.0)
    psi = windowed_plane_wave(grid, k=2.0, flat_halfwidth=20.0, taper_width=16.0)
    assert psi.norm() == pytest.approx(1.0)
    x = grid.axis(0)
    flat = np.abs(x) <= 20.0
    mags = np.abs(psi.samples[flat])
    assert np.max(mags) / np.min(mags) == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.abs(psi.samples[np.abs(x) >= 36.05]) == 0.0)


def test_gaussian_width_tracks_hbar():
    # exp(-p^2 / 2 hbar) maps to exp(-q^2 / 2 hbar) for hbar != 1 as well
    hbar = 0.5
    grid = line(count=384, extent=10.0)
    phi = PolarizedState(np.exp(-grid.axis(0) ** 2 / (2 * hbar)), grid,
                         "momentum", hbar=hbar)
    psi = fourier_project(phi)
    expected = np.exp(-psi.grid.axis(0) ** 2 / (2 * hbar))
    err = np.sqrt(np.sum(np.abs(psi.samples - expected) ** 2)
                  * psi.grid.cell_volume)
    assert err < 1e-10


def test_two_dimensional_projection_and_parseval():
    grid = ConfigGrid((-10.0, -10.0), (10.0, 10.0), (96, 96))
    p1, p2 = np.meshgrid(grid.axis(0), grid.axis(1), indexing="ij")
    samples = np.exp(-(p1**2 + 1.3 * p2**2) / 2 + 0.7j * p1 - 0.4j * p2)
    phi = PolarizedState(samples, grid, "momentum").normalized()
    psi = fourier_project(phi)
    assert psi.n == 2
    assert abs(psi.norm() - 1.0) < 1e-8
    back = fourier_project_back(psi)
    err = np.sqrt(np.sum(np.abs(back.samples - phi.samples) ** 2)
                  * grid.cell_volume)
    assert err < 1e-8
