import numpy as np
import pytest

from geoquant.config import DEFAULT_TOLERANCES
from geoquant.errors import PolarizationViolation
from geoquant.halfform import (ConfigGrid, LinearInP,
                               check_canonical_commutator, check_selfadjoint,
                               divergence, interior_config_states,
                               quantize_halfform, reject_nonlinear)
from geoquant.polynomials import Polynomial
from geoquant.prequant import Observable, poisson_bracket
from geoquant.stencil import derivative_matrix_1d

TOL = DEFAULT_TOLERANCES


def line(count=64, extent=6.0, scheme="fd4", boundary="zero"):
    return ConfigGrid.line(-extent, extent, count, boundary=boundary,
                           scheme=scheme)


def q_var(n=1, axis=0):
    return Polynomial.variable(n, axis)


def test_pure_position_observable_is_multiplication():
    grid = line()
    op = quantize_halfform(LinearInP.from_parts(1, u=q_var()), grid, 1.0)
    assert np.allclose(op.entries, np.diag(grid.axis(0)))


def test_momentum_is_scaled_gradient():
    grid = line()
    f = LinearInP.from_parts(1, v=[Polynomial.constant(1, 1)])
    op = quantize_halfform(f, grid, hbar=0.7)
    d = np.asarray(derivative_matrix_1d(grid.counts[0], grid.spacings[0],
                                        "fd4", "zero").todense())
    assert np.allclose(op.entries, -0.7j * d)


def test_dilation_gets_half_divergence():
    # f = q p: v = q, div v = 1, operator -i hbar (q d/dq + 1/2)
    grid = line()
    op = quantize_halfform(LinearInP.from_parts(1, v=[q_var()]), grid, 1.0)
    d = np.asarray(derivative_matrix_1d(grid.counts[0], grid.spacings[0],
                                        "fd4", "zero").todense())
    expected = -1j * (np.diag(grid.axis(0)) @ d + 0.5 * np.eye(grid.size))
    assert np.allclose(op.entries, expected)


def test_quantization_is_linear_in_f():
    grid = line()
    rng = np.random.default_rng(0)
    u1, v1 = Polynomial(1, {(2,): 0.5}), Polynomial(1, {(1,): -1.0})
    u2, v2 = Polynomial(1, {(1,): 2.0}), Polynomial(1, {(0,): 0.3})
    a, b = rng.uniform(-2, 2, size=2)
    f1 = LinearInP.from_parts(1, u=u1, v=[v1])
    f2 = LinearInP.from_parts(1, u=u2, v=[v2])
    combo = LinearInP.from_parts(1, u=a * u1 + b * u2, v=[a * v1 + b * v2])
    lhs = quantize_halfform(combo, grid, 1.0).entries
    rhs = a * quantize_halfform(f1, grid, 1.0).entries \
        + b * quantize_halfform(f2, grid, 1.0).entries
    assert np.max(np.abs(lhs - rhs)) < 1e-13


def test_canonical_commutator_spectral():
    grid = line(count=256, extent=8.0, scheme="spectral")
    assert check_canonical_commutator(grid, 1.0) < TOL.grid


def test_commutator_of_coordinates_vanishes_exactly():
    grid = line(count=32)
    qa = quantize_halfform(LinearInP.from_parts(1, u=q_var()), grid, 1.0).entries
    qb = quantize_halfform(LinearInP.from_parts(1, u=Polynomial(1, {(2,): 1.0})),
                           grid, 1.0).entries
    assert not np.any(qa @ qb - qb @ qa)


def test_cross_axis_commutator_vanishes():
    grid = ConfigGrid((-4.0, -4.0), (4.0, 4.0), (24, 24), scheme="fd4")
    assert check_canonical_commutator(grid, 1.0, a=0, b=1) < 1e-12


def test_multiplication_selfadjoint_to_machine():
    grid = line()
    f = LinearInP.from_parts(1, u=q_var())
    assert check_selfadjoint(f, grid, 1.0) < 1e-14


def test_momentum_selfadjoint_on_periodic_grid():
    grid = line(count=64, boundary="periodic")
    f = LinearInP.from_parts(1, v=[Polynomial.constant(1, 1)])
    assert check_selfadjoint(f, grid, 1.0) < 1e-13


def test_dilation_selfadjoint_with_divergence_term():
    grid = line(count=256, extent=8.0, scheme="spectral")
    f = LinearInP.from_parts(1, v=[q_var()])
    assert check_selfadjoint(f, grid, 1.0) < TOL.grid


def test_negative_control_breaks_symmetry_at_order_hbar():
    """Dropping the divergence term leaves an O(hbar) defect.

    Integration by parts gives <u, q v'> + <q u', v> = -<u, v> on interior
    supports, so the panel pair u = v pins the defect at hbar exactly.
    """
    grid = line(count=256, extent=8.0, scheme="spectral")
    f = LinearInP.from_parts(1, v=[q_var()])
    for hbar in (1.0, 0.5):
        control = check_selfadjoint(f, grid, hbar,
                                    include_divergence_term=False)
        assert control > 0.4 * hbar
        assert control == pytest.approx(hbar, rel=1e-6)


def test_reject_quadratic_momentum():
    with pytest.raises(PolarizationViolation):
        reject_nonlinear(Observable.from_terms(1, {(0, 2): 1.0}))


def test_accept_cubic_position():
    f = reject_nonlinear(Observable.from_terms(1, {(3, 0): 1.0}))
    assert f.u == Polynomial(1, {(3,): 1.0})
    assert all(v is None for v in f.v)


def test_accept_linear_combination():
    f = reject_nonlinear(Observable.from_terms(1, {(1, 0): 1.0, (0, 1): 3.0}))
    assert f.u == Polynomial(1, {(1,): 1.0})
    assert f.v[0] == Polynomial(1, {(0,): 3.0})


def test_linear_in_p_closed_under_bracket_and_dirac():
    """The class is bracket-closed; the quantized bracket matches."""
    grid = line(count=192, extent=8.0, scheme="spectral")
    hbar = 1.0
    rng = np.random.default_rng(3)
    states = interior_config_states(grid, count=3, seed=9)
    for _ in range(4):
        f_obs = Observable.from_terms(1, {
            (1, 0): rng.uniform(-1, 1), (2, 0): rng.uniform(-1, 1),
            (0, 1): rng.uniform(-1, 1), (1, 1): rng.uniform(-1, 1)})
        g_obs = Observable.from_terms(1, {
            (1, 0): rng.uniform(-1, 1), (0, 1): rng.uniform(-1, 1),
            (1, 1): rng.uniform(-1, 1)})
        bracket = poisson_bracket(f_obs, g_obs)
        assert bracket.poly.degree_in(1) <= 1  # symbolic closure
        op_f = quantize_halfform(reject_nonlinear(f_obs), grid, hbar).entries
        op_g = quantize_halfform(reject_nonlinear(g_obs), grid, hbar).entries
        op_br = quantize_halfform(reject_nonlinear(bracket), grid, hbar).entries
        for v in states:
            r = op_f @ (op_g @ v) - op_g @ (op_f @ v) + 1j * hbar * (op_br @ v)
            assert np.linalg.norm(r) / np.linalg.norm(v) < TOL.grid


def test_fourth_order_convergence():
    f = LinearInP.from_parts(1, v=[q_var()])
    residuals = {}
    for count in (64, 128):
        grid = line(count=count, extent=8.0, scheme="fd4")
        states = interior_config_states(grid, count=3, seed=2, modulated=False)
        residuals[count] = check_selfadjoint(f, grid, 1.0, states=states)
    assert residuals[64] / residuals[128] > 8.0


def test_divergence_paths():
    grid = line()
    poly_field = LinearInP.from_parts(1, v=[Polynomial(1, {(2,): 1.5})])
    div, path = divergence(poly_field, grid)
    assert path == "analytic"
    assert np.allclose(div, 3.0 * grid.axis(0))
    callable_field = LinearInP.from_parts(1, v=[lambda q: 1.5 * q**2])
    div_c, path_c = divergence(callable_field, grid)
    assert path_c == "stencil"
    # interior agreement; the stencil is only approximate at the edges
    interior = slice(4, -4)
    assert np.max(np.abs(div_c[interior] - div[interior])) < 1e-10


def test_grid_validation():
    with pytest.raises(ValueError):
        ConfigGrid.line(-1.0, 1.0, 8)
    with pytest.raises(ValueError):
        ConfigGrid((-1.0,), (1.0,), (32,), scheme="bogus")
    with pytest.raises(ValueError):
        ConfigGrid((-1.0, -1.0, -1.0), (1.0, 1.0, 1.0), (32, 32, 32))
