"""Nonlinear Riesz projection of 1-homogeneous polynomials.

For ``phi(z) = sum_j c_j z_j`` the analytic part of ``|phi|^{p-2} phi`` is
again linear, with j-th coefficient ``(p/2) c_j I_j``, where

    I_j = int_0^1 int_{T^d} |phi(z_1, .., r z_j, .., z_d)|^{p-2} dm_d 2r dr.

Only the moduli of the coefficients matter.  Writing ``w = r z_j`` turns
``I_j`` into an area integral over the disc.  One torus variable is fixed by
rotation, the smallest remaining coefficient is integrated in closed form
(:func:`ring_kernel`), and the rest is a one-dimensional integral over the
modulus ``|c_j w + X|``, where ``X`` is the modulus of the remaining part.
That part is a single number for three nonzero coordinates, depends on one
angle for four, and on more angles beyond that.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .polyalg import GaussianRational, _abs2, compositions, multinomial
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    disc_modulus_integral,
    integrate_pieces,
    ring_kernel,
)

__all__ = [
    "IjValues",
    "EnumerationCapExceeded",
    "ENUMERATION_CAP",
    "as_coeffs",
    "ij_integral",
    "ij_integrals",
    "project_linear",
    "project_linear_even",
    "normalized_op",
    "linear_norm_power",
    "linear_norm_power_even",
]

ENUMERATION_CAP = 64
# relative size below which a coefficient no longer affects the integrals
NEGLIGIBLE = 1e-17


class EnumerationCapExceeded(ValueError):
    """Raised when an exact multinomial enumeration would exceed the n*d cap."""


@dataclass(frozen=True)
class IjValues:
    values: np.ndarray
    p: float
    error_estimates: np.ndarray
    converged: bool = True


def as_coeffs(c) -> np.ndarray:
    arr = np.asarray([complex(x) for x in c], dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("coefficient vector must be a nonempty 1-d sequence")
    return arr


def _inner_tol(spec: QuadratureSpec) -> float:
    # the reduced integrals converge fast; ask for far more than the headline tolerance
    return max(spec.target_tol * 1e-4, 1e-13)


# ---------------------------------------------------------------------------
# helpers for angular layers


def _crossing_angles(a: float, b: float, targets) -> list[float]:
    """Angles in (0, pi) where |a + b e^{i theta}| equals one of ``targets``."""
    out = []
    for t in targets:
        cos = (t * t - a * a - b * b) / (2.0 * a * b)
        if -1.0 < cos < 1.0:
            out.append(math.acos(cos))
    return out


def _angle_breaks(a: float, b: float, targets) -> np.ndarray:
    return np.array(sorted({0.0, math.pi, *_crossing_angles(a, b, targets)}))


def _trapezoid_combine(func, mods: tuple[float, ...], tol: float, max_points: int):
    """Average ``func`` over the angle joining the two largest moduli.

    ``func`` maps a sorted modulus tuple with one fewer entry to
    ``(value, error)``.  The grid on ``[0, pi]`` doubles until two successive
    estimates agree.
    """
    a, b, rest = mods[0], mods[1], mods[2:]
    cache: dict[int, tuple[float, float]] = {}

    def node(k: int, n: int):
        key = k * (max_points // n)
        if key not in cache:
            theta = math.pi * k / n
            x = abs(a + b * complex(math.cos(theta), math.sin(theta)))
            cache[key] = func(tuple(sorted((x, *rest), reverse=True)))
        return cache[key]

    def rule(n: int):
        vals = [node(k, n) for k in range(n + 1)]
        w = [0.5 if k in (0, n) else 1.0 for k in range(n + 1)]
        v = sum(wk * v[0] for wk, v in zip(w, vals)) / n
        e = max(v[1] for v in vals)
        return v, e

    n = 8
    prev, _ = rule(n)
    while True:
        n *= 2
        val, inner = rule(n)
        err = abs(val - prev) + inner
        if err <= tol or 2 * n > max_points:
            return val, err
        prev = val


# ---------------------------------------------------------------------------
# norm powers  int_{T^d} |sum m_k z_k|^s dm_d


@functools.lru_cache(maxsize=4096)
def _norm_power_sorted(mods: tuple[float, ...], s: float, tol: float, level: int,
                       max_refine: int, max_points: int):
    n = len(mods)
    if s == 0:
        return 1.0, 0.0
    if n == 0:
        return (0.0 if s > 0 else math.inf), 0.0
    if n == 1:
        return mods[0] ** s, 0.0
    if n == 2:
        return float(ring_kernel(mods[0], mods[1], s)), 0.0
    if n == 3:
        a, b, c = mods
        breaks = _angle_breaks(a, b, [c])

        def f(theta):
            x = np.abs(a + b * np.exp(1j * theta))
            return ring_kernel(x, c, s)

        val, err, _ = integrate_pieces(f, breaks, tol=tol * math.pi, level=level,
                                       max_refine=max_refine)
        return float(val) / math.pi, float(err) / math.pi

    def sub(m):
        return _norm_power_sorted(m, s, tol, level, max_refine, max_points)

    return _trapezoid_combine(sub, mods, tol, max_points)


def _scaled(mods, s: float) -> tuple[float, tuple[float, ...]]:
    """Split off the largest modulus and drop moduli too small to matter.

    Both integrals are homogeneous of degree ``s``.  A modulus ``m`` next to
    a largest modulus ``M`` changes them by about ``(m/M)^min(2, s+2)``.
    """
    nz = [float(m) for m in mods if m > 0]
    if not nz:
        return 1.0, ()
    top = max(nz)
    keep = min(2.0, s + 2.0)
    rel = tuple(sorted((m / top for m in nz if (m / top) ** keep >= NEGLIGIBLE), reverse=True))
    return top, rel


def linear_norm_power(c, s: float, spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """``(int_{T^d} |sum c_k z_k|^s dm_d, error)`` for ``s > -2``."""
    s = float(s)
    top, mods = _scaled(np.abs(as_coeffs(c)), s)
    if not mods:
        return _norm_power_sorted((), s, 0.0, 4, 0, 0)
    val, err = _norm_power_sorted(mods, s, _inner_tol(spec), 4, spec.max_refine,
                                  spec.angular_points)
    return val * top**s, err * top**s


def linear_norm_power_even(c, n: int):
    """Exact ``||sum c_k z_k||_{2n}^{2n} = sum_{|a|=n} C(n,a)^2 prod |c_k|^{2 a_k}``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    m2 = [_abs2(_exact_or_complex(x)) for x in c]
    _check_cap(n, len(m2))
    total = Fraction(0) if all(isinstance(v, Fraction) for v in m2) else 0.0
    for alpha in compositions(n, len(m2)):
        term = multinomial(alpha) ** 2
        for mk, ak in zip(m2, alpha):
            if ak:
                term = term * mk**ak
        total += term
    return total


# ---------------------------------------------------------------------------
# the I_j integrals


@functools.lru_cache(maxsize=4096)
def _ij_sorted(cj: float, others: tuple[float, ...], s: float, tol: float, level: int,
               max_refine: int, max_points: int):
    """I for the coordinate of modulus ``cj > 0`` with the other nonzero moduli
    ``others`` sorted in decreasing order.  Returns ``(value, error)``."""
    if s == 0:
        return 1.0, 0.0
    n = len(others)
    if n == 0:
        return 2.0 * cj**s / (s + 2.0), 0.0
    if n == 1:
        val, err, _ = disc_modulus_integral(lambda sig, X: sig**s, cj, others[0], tol=tol,
                                            level=level, max_refine=max_refine)
        return float(val), float(err)
    if n == 2:
        X, cl = others

        def g(sig, _X):
            return ring_kernel(sig, cl, s)

        val, err, _ = disc_modulus_integral(g, cj, X, [cl], tol=tol, level=level,
                                            max_refine=max_refine)
        return float(val), float(err)
    if n == 3:
        a, b, cl = others
        # inner integral is non-smooth where its breakpoints collide
        critical = [cj + cl, abs(cj - cl), cj]
        breaks = _angle_breaks(a, b, critical)
        inner_err = [0.0]

        def g(sig, _X):
            return ring_kernel(sig, cl, s)

        def f(theta):
            X = np.abs(a + b * np.exp(1j * theta))
            val, err, _ = disc_modulus_integral(g, cj, X, [cl], tol=tol, level=level,
                                                max_refine=max_refine)
            inner_err[0] = max(inner_err[0], float(np.max(err, initial=0.0)))
            return val

        val, err, _ = integrate_pieces(f, breaks, tol=tol * math.pi, level=level,
                                       max_refine=max_refine)
        return float(val) / math.pi, float(err) / math.pi + inner_err[0]

    def sub(m):
        return _ij_sorted(cj, m, s, tol, level, max_refine, max_points)

    return _trapezoid_combine(sub, others, tol, max_points)


def _check_p(p: float):
    if not p >= 1 or math.isinf(p):
        raise ValueError(f"p must lie in [1, inf), got {p}")


def ij_integral(c, p: float, j: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """The integral ``I_j`` for ``phi = sum c_k z_k``; depends only on ``|c_k|``."""
    return float(ij_integrals(c, p, spec).values[j])


def ij_integrals(c, p: float, spec: QuadratureSpec = DEFAULT_SPEC) -> IjValues:
    _check_p(p)
    arr = as_coeffs(c)
    if not np.any(arr != 0):
        raise ValueError("coefficient vector must be nontrivial")
    mods = np.abs(arr)
    s = float(p) - 2.0
    tol = _inner_tol(spec)
    vals = np.empty(len(mods))
    errs = np.empty(len(mods))
    top = float(np.max(mods))
    for j, mj in enumerate(mods):
        _, others = _scaled([top] + [m for k, m in enumerate(mods) if k != j], s)
        others = others[1:]
        if mj > 0:
            v, e = _ij_sorted(float(mj) / top, others, s, tol, 4, spec.max_refine,
                              spec.angular_points)
        else:
            # phi does not depend on z_j, so the radial integral is trivial
            v, e = _norm_power_sorted(others, s, tol, 4, spec.max_refine, spec.angular_points)
        vals[j], errs[j] = v * top**s, e * top**s
    ok = bool(np.all(errs[mods > 0] <= spec.target_tol))
    return IjValues(vals, float(p), errs, ok)


def project_linear(c, p: float, spec: QuadratureSpec = DEFAULT_SPEC,
                   ij: IjValues | None = None) -> np.ndarray:
    """Coefficients of ``P(|phi|^{p-2} phi)``: ``(p/2) c_j I_j``; zeros stay exactly zero."""
    arr = as_coeffs(c)
    if ij is None:
        ij = ij_integrals(arr, p, spec)
    out = np.zeros_like(arr)
    nz = arr != 0
    out[nz] = arr[nz] * (0.5 * float(p) * ij.values[nz])
    return out


def normalized_op(c, p: float, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """The projection rescaled to unit H^2 norm."""
    out = project_linear(c, p, spec)
    return out / np.linalg.norm(out)


# ---------------------------------------------------------------------------
# exact even-exponent route


def _exact_or_complex(x):
    if isinstance(x, (GaussianRational, int, Fraction)) and not isinstance(x, bool):
        return GaussianRational.coerce(x)
    return complex(x)


def _check_cap(n: int, d: int, cap: int = ENUMERATION_CAP):
    if n * d > cap:
        raise EnumerationCapExceeded(
            f"multinomial enumeration with n*d = {n * d} exceeds the cap {cap}; "
            "use the quadrature route"
        )


def project_linear_even(c: Sequence, n: int, cap: int = ENUMERATION_CAP) -> list:
    """Exact projection at ``p = 2n + 2``.

    The j-th coefficient is ``c_j (n+1) sum_{|a|=n} C(n,a)^2 prod|c_k|^{2a_k} / (a_j+1)``.
    Exact inputs (ints, Fractions, Gaussian rationals) give exact outputs.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    cs = [_exact_or_complex(x) for x in c]
    d = len(cs)
    _check_cap(n, d, cap)
    exact = all(isinstance(x, GaussianRational) for x in cs)
    m2 = [_abs2(x) for x in cs]
    zero = Fraction(0) if exact else 0.0
    sums = [zero] * d
    for alpha in compositions(n, d):
        w = multinomial(alpha) ** 2
        for mk, ak in zip(m2, alpha):
            if ak:
                w = w * mk**ak
        for j in range(d):
            sums[j] += Fraction(w, alpha[j] + 1) if exact else w / (alpha[j] + 1)
    return [cs[j] * ((n + 1) * sums[j]) for j in range(d)]
