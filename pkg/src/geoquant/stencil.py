"""Uniform-grid differentiation matrices.

Centered finite differences of order 2/4/6/8 plus an FFT-based spectral
scheme.  Boundary handling: ``"zero"`` treats samples beyond the edge as
zero (the stencil simply truncates), ``"periodic"`` wraps.  The spectral
scheme always differentiates the periodic extension of the box; with states
that vanish near the boundary the two conventions agree to the size of the
tails, which is what every interior-test-vector check in this package relies
on.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp

__all__ = ["derivative_matrix_1d", "second_derivative_matrix_1d", "FD_SCHEMES"]

# antisymmetric halves of the centered first-derivative stencils
_FIRST_HALF = {
    "fd2": [1.0 / 2.0],
    "fd4": [2.0 / 3.0, -1.0 / 12.0],
    "fd6": [3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0],
    "fd8": [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0],
}

# center + symmetric halves of the second-derivative stencils
_SECOND = {
    "fd2": (-2.0, [1.0]),
    "fd4": (-5.0 / 2.0, [4.0 / 3.0, -1.0 / 12.0]),
    "fd6": (-49.0 / 18.0, [3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0]),
    "fd8": (-205.0 / 72.0, [8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0]),
}

FD_SCHEMES = tuple(_FIRST_HALF)
SCHEMES = FD_SCHEMES + ("spectral",)


def _banded(n: int, spacing: float, center: float, half: list[float],
            antisymmetric: bool, boundary: str) -> sp.csr_matrix:
    rows, cols, vals = [], [], []
    idx = np.arange(n)

    def put(offset: int, coeff: float):
        if boundary == "periodic":
            rows.append(idx)
            cols.append((idx + offset) % n)
            vals.append(np.full(n, coeff))
        else:  # zero padding: drop out-of-range couplings
            lo = max(0, -offset)
            hi = min(n, n - offset)
            rows.append(idx[lo:hi])
            cols.append(idx[lo:hi] + offset)
            vals.append(np.full(hi - lo, coeff))

    if center:
        put(0, center)
    for k, c in enumerate(half, start=1):
        put(k, c)
        put(-k, -c if antisymmetric else c)
    mat = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n))
    return mat.multiply(1.0 / spacing if antisymmetric else 1.0 / spacing**2).tocsr()


def _spectral_wavenumbers(n: int, spacing: float) -> np.ndarray:
    return 2.0 * np.pi * np.fft.fftfreq(n, d=spacing)


@lru_cache(maxsize=64)
def _spectral_first(n: int, spacing: float) -> np.ndarray:
    k = _spectral_wavenumbers(n, spacing)
    if n % 2 == 0:
        k = k.copy()
        k[n // 2] = 0.0  # odd symbol has no consistent Nyquist derivative
    mat = np.fft.ifft(1j * k[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0)
    return np.ascontiguousarray(mat.real)


@lru_cache(maxsize=64)
def _spectral_second(n: int, spacing: float) -> np.ndarray:
    k = _spectral_wavenumbers(n, spacing)
    mat = np.fft.ifft(-(k**2)[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0)
    return np.ascontiguousarray(mat.real)


def _validate(n: int, spacing: float, scheme: str, boundary: str):
    if n < 2:
        raise ValueError("need at least two samples")
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; options: {SCHEMES}")
    if boundary not in ("zero", "periodic"):
        raise ValueError(f"unknown boundary {boundary!r}")


def derivative_matrix_1d(n: int, spacing: float, scheme: str = "fd4",
                         boundary: str = "zero"):
    """First-derivative matrix; sparse for fd schemes, dense for spectral."""
    _validate(n, spacing, scheme, boundary)
    if scheme == "spectral":
        return _spectral_first(n, float(spacing))
    return _banded(n, spacing, 0.0, _FIRST_HALF[scheme], True, boundary)


def second_derivative_matrix_1d(n: int, spacing: float, scheme: str = "fd4",
                                boundary: str = "zero"):
    """Second-derivative matrix; sparse for fd schemes, dense for spectral."""
    _validate(n, spacing, scheme, boundary)
    if scheme == "spectral":
        return _spectral_second(n, float(spacing))
    center, half = _SECOND[scheme]
    return _banded(n, spacing, center, half, False, boundary)
