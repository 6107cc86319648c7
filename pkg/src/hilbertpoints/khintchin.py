"""Khintchin constants for Steinhaus sums and the functional K_p(c) = ||sum c_j z_j||_p."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .projection import as_coeffs, linear_norm_power, linear_norm_power_even
from .quadrature import DEFAULT_SPEC, QuadratureSpec

__all__ = [
    "KhintchinConstants",
    "CLTReport",
    "MAX_QUADRATURE_DIM",
    "constants",
    "k_functional",
    "equal_coeff_norm",
    "equal_coeff_norm_power",
    "clt_limit_check",
    "sphere_gradient",
]

MAX_QUADRATURE_DIM = 6


@dataclass(frozen=True)
class KhintchinConstants:
    p: float
    a_p: float
    b_p: float


def constants(p: float) -> KhintchinConstants:
    if not p >= 1:
        raise ValueError("p must be >= 1")
    g = math.gamma(1.0 + 0.5 * p) ** (1.0 / p)
    return KhintchinConstants(float(p), min(1.0, g), max(1.0, g))


def _even_n(p) -> int | None:
    if float(p) == int(p) and int(p) >= 2 and int(p) % 2 == 0:
        return int(p) // 2
    return None


def k_functional(c, p: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``||sum c_j z_j||_{H^p}``; the caller normalizes ``c``."""
    if not p >= 1:
        raise ValueError("p must be >= 1")
    n = _even_n(p)
    if n is not None:
        return float(linear_norm_power_even(c, n)) ** (1.0 / p)
    val, _ = linear_norm_power(as_coeffs(c), p, spec)
    return val ** (1.0 / p)


def _equal_sum_even(d: int, n: int) -> int:
    """``sum_{|a|=n} (n!/a!)^2`` for a in N^d, via the power of ``sum_k x^k / k!^2``."""
    series = [Fraction(1, math.factorial(k) ** 2) for k in range(n + 1)]
    acc = [Fraction(0)] * (n + 1)
    acc[0] = Fraction(1)
    base, e = series, d
    while e:
        if e & 1:
            acc = _trunc_mul(acc, base, n)
        e >>= 1
        if e:
            base = _trunc_mul(base, base, n)
    total = acc[n] * math.factorial(n) ** 2
    assert total.denominator == 1
    return int(total)


def _trunc_mul(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(n + 1 - i):
                out[i + j] += x * b[j]
    return out


def equal_coeff_norm_power(d: int, p: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """``||d^{-1/2} sum_{j<=d} z_j||_p^p``; an exact Fraction for even p."""
    if d < 1:
        raise ValueError("d must be >= 1")
    n = _even_n(p)
    if n is not None:
        return Fraction(_equal_sum_even(d, n), d**n)
    if d > MAX_QUADRATURE_DIM:
        raise ValueError(
            f"d = {d} is beyond the quadrature budget at non-even p "
            f"(max {MAX_QUADRATURE_DIM}); use an even p for larger d"
        )
    val, _ = linear_norm_power(np.full(d, 1.0 / math.sqrt(d)), p, spec)
    return val


def equal_coeff_norm(d: int, p: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    return float(equal_coeff_norm_power(d, p, spec)) ** (1.0 / p)


@dataclass
class CLTReport:
    p: float
    b_p: float
    rows: list  # (d, norm, gap)
    monotone: bool
    final_gap: float


def clt_limit_check(p: float, d_list, spec: QuadratureSpec = DEFAULT_SPEC) -> CLTReport:
    """Tabulate ``equal_coeff_norm(d, p)`` against its limit ``b_p`` as d grows."""
    if not p > 2:
        raise ValueError("the central-limit comparison needs p > 2")
    b = constants(p).b_p
    rows = []
    for d in sorted(d_list):
        v = equal_coeff_norm(d, p, spec)
        rows.append((d, v, b - v))
    gaps = [r[2] for r in rows]
    monotone = all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    return CLTReport(float(p), b, rows, monotone, gaps[-1] if gaps else math.nan)


def sphere_gradient(c, p: float, spec: QuadratureSpec = DEFAULT_SPEC, step: float = 1e-4):
    """Central-difference gradient of ``K_p`` on the unit sphere of C^d at ``c``.

    ``c`` is viewed as a point of R^{2d}; the derivative is taken along an
    orthonormal basis of its tangent space, moving back to the sphere by
    normalizing.  Returns the tangent-space gradient vector.
    """
    z = as_coeffs(c)
    z = z / np.linalg.norm(z)
    x = np.concatenate([z.real, z.imag])
    dim = x.size
    # orthonormal complement of x from a QR factorization
    q, _ = np.linalg.qr(np.column_stack([x, np.eye(dim)]))
    basis = q[:, 1:dim]

    def value(y):
        y = y / np.linalg.norm(y)
        half = dim // 2
        return k_functional(y[:half] + 1j * y[half:], p, spec)

    grad = np.empty(basis.shape[1])
    for i in range(basis.shape[1]):
        e = basis[:, i]
        grad[i] = (value(x + step * e) - value(x - step * e)) / (2 * step)
    return grad
