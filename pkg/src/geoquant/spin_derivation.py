"""Symbolic derivation of the sphere-sector operators on holomorphic states.

The spin operator matrices in :mod:`geoquant.spin` are hard-coded first-order
differential operators in z.  This module rederives them from first
principles with sympy so the hard-coded forms are pinned by an independent
computation rather than copied by hand:

* Kahler potential of sector n:  K = n*hbar*log(1 + z*zbar)
* momentum functions:
      Jp = -n*hbar*z    / (1 + z*zbar)
      Jm = -n*hbar*zbar / (1 + z*zbar)
      J3 = -(n*hbar/2) * (1 - z*zbar) / (1 + z*zbar)
* Hamiltonian field:  X_f = (i/(n*hbar)) (1+z*zbar)^2 (df/dzbar d_z - df/dz d_zbar)
* operator on a holomorphic phi, in the gauge where the connection is
  d - (1/hbar) dK restricted to the holomorphic directions:

      P_f phi = -i*hbar * a * phi' + (i * a * dK/dz) * phi + f * phi,

  with a the d_z component of X_f.  For the three momentum functions the
  zbar dependence cancels and the result is a polynomial-coefficient
  first-order operator in z.
"""

from __future__ import annotations

__all__ = ["derive_operator_symbols"]


def derive_operator_symbols(n: int, hbar: float = 1.0) -> dict[str, tuple[tuple, tuple]]:
    """Return {name: (derivative coefficients, scalar coefficients)}.

    Coefficient tuples are ascending in powers of z, e.g. the pair
    ``((0, hbar), (-n*hbar/2,))`` encodes ``hbar*z*d/dz - n*hbar/2``.
    Raises if the reduction leaves any antiholomorphic dependence behind.
    """
    import sympy as sym

    if n < 0:
        raise ValueError("sector n must be >= 0")
    z, zb = sym.symbols("z zbar")
    hb = sym.Rational(1) * sym.nsimplify(hbar)
    nn = sym.Integer(n)
    u = 1 + z * zb

    kahler = nn * hb * sym.log(u)
    functions = {
        "J3": -(nn * hb / 2) * (1 - z * zb) / u,
        "Jplus": -nn * hb * z / u,
        "Jminus": -nn * hb * zb / u,
    }

    out: dict[str, tuple[tuple, tuple]] = {}
    for name, f in functions.items():
        if n == 0:
            out[name] = ((0.0,), (0.0,))
            continue
        a = (sym.I / (nn * hb)) * u**2 * sym.diff(f, zb)
        dcoeff = sym.simplify(-sym.I * hb * a)
        scalar = sym.simplify(sym.I * a * sym.diff(kahler, z) + f)
        for expr, label in ((dcoeff, "derivative"), (scalar, "scalar")):
            if expr.has(zb):
                raise ArithmeticError(
                    f"{name}: {label} part retains antiholomorphic dependence: {expr}")
        dpoly = sym.Poly(dcoeff, z)
        spoly = sym.Poly(scalar, z) if scalar != 0 else sym.Poly(0, z)
        out[name] = (
            tuple(float(c) for c in reversed(dpoly.all_coeffs())),
            tuple(float(c) for c in reversed(spoly.all_coeffs())),
        )
    return out
