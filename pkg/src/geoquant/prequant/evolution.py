"""Prequantum unitary evolution on a phase-space grid.

A complete Hamiltonian flow rho_t acts on sections by

    (psi_t)(m) = exp[-(i/hbar) * Integral_0^t L_f(rho_tau(m)) dtau] * psi(rho_t(m)),

where ``L_f = p.(df/dp) - f`` in the p.dq gauge.  The four generators with
closed-form flows are supported: translations by q and p, the free kinetic
term c*p^2 (mass m = 1/(2c)), and the phase-plane rotation a*(q^2 + p^2).
Flows are evaluated analytically, the pullback by bicubic interpolation, and
the phase integral by Gauss-Legendre quadrature per step, so the only error
in the norm-preservation check is the interpolation itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RectBivariateSpline

from ..errors import FlowEscapesGrid, UnsupportedObservable
from ..polynomials import Polynomial
from .gridops import PhaseSpaceGrid
from .observables import Observable, ObservableKind

__all__ = ["prequantum_evolve", "classify_flow", "FlowSpec"]

_GL_NODES = 16


@dataclass(frozen=True)
class FlowSpec:
    """Closed-form flow family and its parameter."""

    kind: str  # "translation_q" | "translation_p" | "free" | "rotation"
    coeff: float  # generator coefficient (alpha, c or a)
    constant: float = 0.0  # additive constant in f, enters only the phase


def classify_flow(f: Observable) -> FlowSpec:
    """Match f against the analytically integrable generator families."""
    if f.kind is not ObservableKind.POLY_QP or f.n != 1:
        raise UnsupportedObservable("evolution supports 1D polynomial observables")
    coeffs = {e: float(c) for e, c in f.poly.coeffs.items()}
    const = coeffs.pop((0, 0), 0.0)
    if not coeffs:
        return FlowSpec("translation_q", 0.0, const)  # zero generator: identity flow
    if set(coeffs) == {(0, 1)}:
        return FlowSpec("translation_q", coeffs[(0, 1)], const)  # f = c*p
    if set(coeffs) == {(1, 0)}:
        return FlowSpec("translation_p", coeffs[(1, 0)], const)  # f = c*q
    if set(coeffs) == {(0, 2)}:
        return FlowSpec("free", coeffs[(0, 2)], const)  # f = c*p^2 = p^2/2m
    if set(coeffs) == {(2, 0), (0, 2)} and np.isclose(coeffs[(2, 0)], coeffs[(0, 2)]):
        return FlowSpec("rotation", coeffs[(0, 2)], const)  # f = a*(q^2+p^2)
    raise UnsupportedObservable(
        "no closed-form flow for this observable; supported: c*p, c*q, c*p^2, a*(q^2+p^2)")


def _flow_map(spec: FlowSpec, q: np.ndarray, p: np.ndarray, t: float):
    if spec.kind == "translation_q":
        return q + spec.coeff * t, p
    if spec.kind == "translation_p":
        return q, p - spec.coeff * t
    if spec.kind == "free":
        return q + 2.0 * spec.coeff * t * p, p
    if spec.kind == "rotation":
        w = 2.0 * spec.coeff * t
        c, s = np.cos(w), np.sin(w)
        return q * c + p * s, p * c - q * s
    raise UnsupportedObservable(spec.kind)


def _lagrangian(f: Observable) -> Polynomial:
    """L_f = p * df/dp - f in the p.dq gauge."""
    p_var = Polynomial.variable(2, 1)
    return p_var * f.dp(0) - f.poly


def prequantum_evolve(f: Observable, psi0: np.ndarray, t: float, steps: int,
                      grid: PhaseSpaceGrid, hbar: float,
                      max_escape_fraction: float = 0.5) -> np.ndarray:
    """Evolve a grid section along the prequantum flow of f.

    ``psi0`` may be flat or shaped ``(n_q, n_p)``; the result matches the
    input layout.  Grid nodes whose flowed position leaves the extents are
    filled with zeros; if their fraction exceeds ``max_escape_fraction`` a
    :class:`FlowEscapesGrid` is raised carrying that fraction.
    """
    if grid.n != 1:
        raise UnsupportedObservable("evolution is implemented for n = 1 grids")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    spec = classify_flow(f)
    lagr = _lagrangian(f)

    flat_input = psi0.ndim == 1
    psi = np.asarray(psi0, dtype=complex).reshape(grid.n_q, grid.n_p)
    qmesh, pmesh = np.meshgrid(grid.q_axis, grid.p_axis, indexing="ij")

    # endpoint of the flow from every node
    q_t, p_t = _flow_map(spec, qmesh, pmesh, t)
    escaped = ((q_t < grid.q_min) | (q_t > grid.q_max)
               | (p_t < grid.p_min) | (p_t > grid.p_max))
    frac = float(np.mean(escaped))
    if frac > max_escape_fraction:
        raise FlowEscapesGrid(
            f"{frac:.1%} of grid points flow outside the extents", escaped_fraction=frac)

    # accumulated action integral along the exact flow
    nodes, weights = np.polynomial.legendre.leggauss(_GL_NODES)
    action = np.zeros_like(qmesh)
    dt = t / steps
    for k in range(steps):
        tau = (k + 0.5 * (nodes + 1.0)) * dt
        for tj, wj in zip(tau, weights):
            q_j, p_j = _flow_map(spec, qmesh, pmesh, tj)
            action += 0.5 * dt * wj * np.real(lagr.evaluate(q_j, p_j))

    interp_r = RectBivariateSpline(grid.q_axis, grid.p_axis, psi.real, kx=3, ky=3)
    interp_i = RectBivariateSpline(grid.q_axis, grid.p_axis, psi.imag, kx=3, ky=3)
    pulled = (interp_r.ev(q_t.reshape(-1), p_t.reshape(-1))
              + 1j * interp_i.ev(q_t.reshape(-1), p_t.reshape(-1))).reshape(psi.shape)
    pulled[escaped] = 0.0

    out = np.exp(-1j * action / hbar) * pulled
    return out.reshape(-1) if flat_input else out
