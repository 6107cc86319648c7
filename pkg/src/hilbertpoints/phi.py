"""The obstruction coefficient Phi(p).

``Phi(p)`` is the Fourier coefficient at ``(-1, -1, 3)`` of ``|psi|^{p-2} psi`` with
``psi = zeta_1 + zeta_2 + zeta_3``.  Projecting ``|f|^{p-2} f`` for
``f = z_1^3 + z_2^3 + z_1 z_2 z_3`` produces a multiple of ``z_3^3``
proportional to it, so ``f`` can only be a Hilbert point where Phi vanishes.

Three independent evaluations:

* ``phi_even``: exact multinomial sum at ``p = 2n + 2``;
* ``phi_bergman``: an area integral over three discs, valid for ``p > 4``;
* ``phi_quadrature``: a torus integral reduced to one dimension, any ``p >= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special

from .fourier_tables import c3_quadrature
from .polyalg import compositions, multinomial
from .quadrature import DEFAULT_SPEC, QuadratureSpec, disc_modulus_integral, integrate_pieces

__all__ = [
    "PhiSample",
    "PHI_ALPHA",
    "phi_even",
    "phi_bergman",
    "phi_quadrature",
    "phi_curve",
    "status_label",
]

PHI_ALPHA = (-1, -1, 3)


@dataclass(frozen=True)
class PhiSample:
    p: float
    value: float
    method: str
    error_estimate: float
    imag_residual: float = 0.0
    converged: bool = True


def phi_even(n: int) -> Fraction:
    """``Phi(2n + 2)`` exactly:
    ``(n+1) sum_{|b|=n} C(n,b)^2 b_1 b_2 / ((b_3+1)(b_3+2)(b_3+3))``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = Fraction(0)
    for b in compositions(n, 3):
        if b[0] and b[1]:
            total += Fraction(multinomial(b) ** 2 * b[0] * b[1],
                              (b[2] + 1) * (b[2] + 2) * (b[2] + 3))
    return (n + 1) * total


def phi_quadrature(p: float, spec: QuadratureSpec = DEFAULT_SPEC) -> PhiSample:
    re, im, err = c3_quadrature(p, PHI_ALPHA, spec)
    err = max(err, 1e-15)
    return PhiSample(float(p), re, "torus-quadrature", err, abs(im),
                     converged=err <= spec.target_tol)


def phi_bergman(p: float, spec: QuadratureSpec = DEFAULT_SPEC) -> PhiSample:
    """Area-integral form, valid for ``p > 4``:

    ``C(p/2, 3) (p-2)(p-4)/4 * int_{D^3} |w_1 + w_2 + w_3|^{p-6} 3(1 - |w_3|^2)^2 dA``.

    Rotating ``w_3 = r e^{it}`` out of the picture leaves a radial integral of
    ``h(r) = int_D K(|w + r|) dA(w)`` with ``K(x) = int_D |w + x|^{p-6} dA(w)``;
    both disc integrals are one-dimensional in the modulus.
    """
    if not p > 4:
        raise ValueError("the area form needs p > 4 (it diverges at p = 4)")
    s = float(p) - 6.0
    tol = max(spec.target_tol * 1e-3, 1e-11)
    pref = float(special.binom(0.5 * p, 3) * (p - 2) * (p - 4) / 4.0)
    if s == 0:
        # the integrand is 3(1 - |w_3|^2)^2, whose integral is 1
        return PhiSample(float(p), pref, "bergman", 0.0)

    def K(x):
        val, _, _ = disc_modulus_integral(lambda sig, X: sig**s, 1.0, x, tol=tol,
                                          max_refine=spec.max_refine)
        return val

    errs = [0.0]

    def h(r):
        val, err, _ = disc_modulus_integral(lambda sig, X: K(sig), 1.0, r, [1.0], tol=tol,
                                            max_refine=spec.max_refine)
        errs[0] = max(errs[0], float(err))
        return float(val)

    cache: dict[float, float] = {}

    def weighted_h(r):
        flat = np.asarray(r, dtype=float).ravel()
        out = np.empty_like(flat)
        for i, x in enumerate(flat):
            if x not in cache:
                cache[x] = h(x)
            out[i] = 3.0 * (1.0 - x * x) ** 2 * cache[x] * 2.0 * x
        return out.reshape(np.shape(r))

    # the weight vanishes at both ends, so nodes hugging them are skipped
    J, jerr, ok = integrate_pieces(weighted_h, np.array([0.0, 1.0]), tol=tol, level=2,
                                   max_refine=spec.max_refine, min_fraction=1e-10)
    err = abs(pref) * (float(jerr) + errs[0])
    return PhiSample(float(p), pref * float(J), "bergman", err, 0.0,
                     converged=bool(ok) and err <= spec.target_tol)


def status_label(p: float) -> str:
    """How much is known about the sign of Phi at p; never a claim made by the code."""
    if p in (2.0, 4.0):
        return "zero"
    if p > 4:
        return "positive (proved)"
    return "conjecture: numerical value only"


def _grid(p_min: float, p_max: float, step: float) -> list[float]:
    count = int(math.floor((p_max - p_min) / step + 1e-9))
    return [round(p_min + k * step, 12) for k in range(count + 1)]


def phi_curve(p_min: float, p_max: float, step: float, spec: QuadratureSpec = DEFAULT_SPEC,
              refine: bool = True, levels: int = 3) -> list[PhiSample]:
    """Samples of Phi on a uniform grid, plus extra points near the zeros at 2 and 4."""
    if not 1 <= p_min < p_max:
        raise ValueError("need 1 <= p_min < p_max")
    if not step > 0:
        raise ValueError("step must be positive")
    ps = set(_grid(p_min, p_max, step))
    if refine:
        for z in (2.0, 4.0):
            if p_min <= z <= p_max:
                ps.add(z)
                for k in range(1, levels + 1):
                    h = step / 2**k
                    for q in (z - h, z + h):
                        if p_min <= q <= p_max:
                            ps.add(round(q, 12))
    return [phi_quadrature(p, spec) for p in sorted(ps)]
