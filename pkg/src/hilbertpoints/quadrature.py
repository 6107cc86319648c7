"""Integration over the torus, the radial measure 2r dr and the unit disc.

Conventions: ``dm_k`` is the normalized Haar measure on the k-torus and
``dA`` is area measure on the unit disc normalized so that ``A(D) = 1``.

Most integrals in this package are reduced analytically to one dimension
before any quadrature happens.  The reductions leave integrands that are
smooth between a handful of known breakpoints and have integrable endpoint
singularities (logarithms, fractional powers, square-root kinks).  Those are
handled by :func:`integrate_pieces`, a nested tanh-sinh rule applied on each
piece, whose error estimate comes from comparing with the half-density rule.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate as sp_integrate
from scipy import special

__all__ = [
    "QuadratureSpec",
    "QuadResult",
    "QuadratureError",
    "DEFAULT_SPEC",
    "integrate_pieces",
    "ring_kernel",
    "ring_integral",
    "disc_modulus_integral",
    "torus_integrate",
    "radial_integrate",
    "disc_integrate",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Resolution and tolerance settings shared by all numerical routines.

    ``angular_points`` caps the per-variable trapezoid grid on the torus,
    ``radial_order`` is the Gauss order for the weight ``2r dr``,
    ``target_tol`` the requested absolute tolerance and ``max_refine`` the
    number of refinement steps allowed on top of the base rule.
    """

    angular_points: int = 256
    radial_order: int = 64
    target_tol: float = 1e-6
    max_refine: int = 4

    def __post_init__(self):
        if self.angular_points < 4:
            raise ValueError("angular_points must be >= 4")
        if self.radial_order < 2:
            raise ValueError("radial_order must be >= 2")
        if not self.target_tol > 0:
            raise ValueError("target_tol must be positive")
        if self.max_refine < 0:
            raise ValueError("max_refine must be >= 0")

    def with_(self, **changes) -> "QuadratureSpec":
        return replace(self, **changes)


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    error: float
    converged: bool = True
    evaluations: int = 0

    def require(self) -> "QuadResult":
        if not self.converged:
            raise QuadratureError(
                f"quadrature did not reach tolerance (best {self.value!r} +- {self.error:.3g})",
                self,
            )
        return self


class QuadratureError(RuntimeError):
    """A quadrature failed to converge; ``best`` holds the last estimate."""

    def __init__(self, msg, best: QuadResult | None = None):
        super().__init__(msg)
        self.best = best


# ---------------------------------------------------------------------------
# tanh-sinh on unions of intervals

# t in [-6, 6] reaches ~1e-300 from each endpoint, so x^(-1+eps) tails are not cut off
_TS_TMAX = 6.0
BASE_LEVEL = 4


@functools.lru_cache(maxsize=16)
def _ts_rule(level: int):
    h = 2.0**-level
    k = np.arange(-math.ceil(_TS_TMAX / h), math.ceil(_TS_TMAX / h) + 1)
    t = k * h
    u = 0.5 * np.pi * np.sinh(t)
    e = np.exp(-2.0 * np.abs(u))
    # distance fractions from the left and right ends, each accurate near its end
    small = e / (1.0 + e)
    big = 1.0 / (1.0 + e)
    left = np.where(u < 0, small, big)
    right = np.where(u < 0, big, small)
    # dx/dt on [0, 1] is (pi/4) cosh(t) sech(u)^2, with sech^2 = 4e / (1 + e)^2
    w = h * 0.25 * np.pi * np.cosh(t) * 4.0 * e / (1.0 + e) ** 2
    keep = (left > 0) & (right > 0) & (w > 0)
    coarse = np.where(k % 2 == 0, 2.0, 0.0)
    return left[keep], right[keep], w[keep], coarse[keep]


def integrate_pieces(f, breaks, *, tol=1e-10, level=BASE_LEVEL, max_refine=4, min_fraction=0.0):
    """Integrate ``f`` over ``[breaks[0], breaks[-1]]`` split at every breakpoint.

    ``breaks`` has shape ``batch + (K,)`` and must be nondecreasing along the
    last axis.  ``f`` receives ``x`` of shape ``batch + (K-1, N)`` and must
    return an array broadcastable to it.  Returns ``(value, error, converged)``
    with ``value`` and ``error`` of shape ``batch``.  Integrable singularities
    are allowed at the breakpoints, never strictly inside a piece.
    ``min_fraction > 0`` skips nodes closer than that fraction of a piece to
    its ends; use it only when the integrand vanishes there.
    """
    breaks = np.asarray(breaks, dtype=float)
    a = breaks[..., :-1, None]
    b = breaks[..., 1:, None]
    width = b - a
    fine = err = None
    converged = False
    for lev in range(level, level + max_refine + 1):
        left, right, w, coarse = _ts_rule(lev)
        if min_fraction > 0:
            near = (left >= min_fraction) & (right >= min_fraction)
            left, right, w, coarse = left[near], right[near], w[near], coarse[near]
        x = np.where(left < 0.5, a + width * left, b - width * right)
        valid = (width > 0) & (x > a) & (x < b)
        xs = np.where(valid, x, np.where(width > 0, 0.5 * (a + b), a))
        with np.errstate(all="ignore"):
            fx = np.where(valid, f(xs), 0.0)
            # nodes that round onto a singular endpoint carry negligible weight
            bad = ~np.isfinite(fx)
            if np.any(bad & (np.minimum(x - a, b - x) > 1e-9 * width)):
                fx = np.where(bad, np.nan, fx)
            else:
                fx = np.where(bad, 0.0, fx)
            scaled = fx * (w * width)
        fine = scaled.sum(axis=(-1, -2))
        rough = (scaled * coarse).sum(axis=(-1, -2))
        err = np.abs(fine - rough)
        if np.all(np.isfinite(err)) and np.max(err, initial=0.0) <= tol:
            converged = True
            break
    return fine, err, converged


# ---------------------------------------------------------------------------
# the circle average  int_T |a + b z|^s dm(z)


def _ring_hyp(s: float, t, q):
    """2F1(-s/2, -s/2; 1; t) given t and q = 1 - t (both accurate)."""
    a = -0.5 * s
    if s == -1.0:
        near = 2.0 / np.pi * special.ellipkm1(q)
        return np.where(q < 0.5, near, special.hyp2f1(0.5, 0.5, 1.0, t))
    if s < -1.0:
        g = 1.0 + s
        near = special.gamma(g) / special.gamma(1 - a) ** 2 * special.hyp2f1(
            a, a, 1 - g, q
        ) + q**g * special.gamma(-g) / special.gamma(a) ** 2 * special.hyp2f1(
            1 - a, 1 - a, 1 + g, q
        )
        return np.where(q < 0.1, near, special.hyp2f1(a, a, 1.0, t))
    return special.hyp2f1(a, a, 1.0, t)


def ring_kernel(M, m, s: float):
    """Vectorized ``int_T |M + m z|^s dm(z)`` for moduli ``M, m >= 0``.

    Uses ``max^s * 2F1(-s/2, -s/2; 1; (min/max)^2)``; near ``M = m`` the
    logarithmic (s = -1) and power (s < -1) singularities are evaluated from
    the ``1 - t`` side so that no precision is lost.
    """
    M = np.abs(np.asarray(M, dtype=float))
    m = np.abs(np.asarray(m, dtype=float))
    hi = np.maximum(M, m)
    lo = np.minimum(M, m)
    if s == 0:
        return np.ones(np.broadcast(M, m).shape)
    with np.errstate(all="ignore"):
        safe = np.where(hi > 0, hi, 1.0)
        r = lo / safe
        t = r * r
        q = (1.0 - r) * (1.0 + r)
        out = hi**s * _ring_hyp(float(s), t, q)
        zero_value = 0.0 if s > 0 else np.inf
        return np.where(hi > 0, out, zero_value)


def ring_integral(a: complex, b: complex, s: float, *, rtol: float = 1e-14) -> float:
    """Closed-form circle average ``int_T |a + b z|^s dm(z)``.

    Sums the Gauss hypergeometric series in ``t = (min/max)^2`` to relative
    tolerance ``rtol``; for ``t > 0.999`` the series is abandoned in favour of
    adaptive quadrature in the angle.
    """
    if s <= -2:
        raise ValueError("ring_integral requires s > -2")
    A, B = abs(a), abs(b)
    M, m = max(A, B), min(A, B)
    if M == 0:
        if s < 0:
            raise ValueError("divergent ring integral: a = b = 0 with s < 0")
        return 1.0 if s == 0 else 0.0
    if s == 0:
        return 1.0
    t = (m / M) ** 2
    if t > 0.999:
        if m == M and s <= -1:
            return math.inf
        return _ring_by_quadrature(M, m, s)
    c = -0.5 * s
    term = 1.0
    total = 1.0
    k = 0
    while True:
        term *= ((k + c) / (k + 1)) ** 2 * t
        total += term
        k += 1
        if term == 0.0:
            break
        # once k > |c| the term ratio stays below t, so the tail is <= term*t/(1-t)
        if k > abs(c) and abs(term) * t / (1.0 - t) <= rtol * abs(total):
            break
    return M**s * total


def _ring_by_quadrature(M: float, m: float, s: float) -> float:
    # phi = pi - theta; written this way the modulus has no cancellation near phi = 0
    d2 = (M - m) ** 2
    mm4 = 4.0 * M * m

    def integrand(phi):
        return (d2 + mm4 * math.sin(0.5 * phi) ** 2) ** (0.5 * s)

    scale = (M - m) / math.sqrt(M * m)
    points = [k * scale for k in (0.25, 1, 4, 16, 64, 256) if k * scale < math.pi]
    val, _ = sp_integrate.quad(
        integrand, 0.0, math.pi, points=points or None, limit=500, epsabs=0, epsrel=1e-13
    )
    return val / math.pi


# ---------------------------------------------------------------------------
# disc integrals of functions of |c w + X|


def _arc_measure(sigma, c, X):
    """Angular measure of the circle {|c w + X| = sigma} inside the unit disc."""
    with np.errstate(all="ignore"):
        ratio = (c * c - (sigma - X) ** 2) / (4.0 * X * sigma)
        ratio = np.where(X > 0, ratio, np.where(sigma < c, 1.0, 0.0))
        return 4.0 * np.arcsin(np.sqrt(np.clip(ratio, 0.0, 1.0)))


def disc_modulus_integral(g, c: float, X, extra_breaks=(), *, tol=1e-10, level=BASE_LEVEL,
                          max_refine=4):
    """``int_D g(|c w + X|) dA(w)`` for ``c > 0`` and (batched) ``X >= 0``.

    Polar coordinates centred at ``-X/c`` turn the area integral into a single
    integral over the modulus ``sigma`` weighted by the angular measure of the
    level circle inside the disc.  ``extra_breaks`` lists points where ``g``
    is singular.  ``g`` receives ``(sigma, X)`` broadcast together.
    Returns ``(value, error, converged)``.
    """
    X = np.asarray(X, dtype=float)
    # work in units of c so that tiny radii neither underflow nor lose the weight
    with np.errstate(over="ignore"):
        Y = X / c
    far = Y > 1e8
    if np.all(far):
        # the disc is a point at this scale: the average is g(X) to O((c/X)^2)
        Xb = X[..., None, None]
        val = np.asarray(g(Xb, Xb), dtype=float)[..., 0, 0]
        return val, np.zeros_like(val), True
    Y = np.where(far, 0.0, Y)
    top = 1.0 + Y
    cols = [np.zeros_like(Y), np.abs(1.0 - Y), top]
    for e in extra_breaks:
        cols.append(np.clip(np.broadcast_to(np.asarray(e, dtype=float) / c, Y.shape), 0.0, top))
    breaks = np.sort(np.stack(np.broadcast_arrays(*cols), axis=-1), axis=-1)
    Xb = X[..., None, None]
    Yb = Y[..., None, None]

    def f(u):
        return g(c * u, Xb) * _arc_measure(u, 1.0, Yb) * u

    val, err, ok = integrate_pieces(f, breaks, tol=tol * math.pi, level=level,
                                    max_refine=max_refine)
    val, err = val / math.pi, err / math.pi
    if np.any(far):
        point = np.asarray(g(Xb, Xb), dtype=float)[..., 0, 0]
        val = np.where(far, point, val)
        err = np.where(far, 0.0, err)
    return val, err, ok


# ---------------------------------------------------------------------------
# generic rules named in the public interface


def torus_integrate(f, k: int, spec: QuadratureSpec = DEFAULT_SPEC, *, start: int = 16,
                    budget: int = 2**22) -> QuadResult:
    """Equal-weight tensor trapezoid rule for ``int_{T^k} f dm_k``.

    ``f(*z)`` receives ``k`` broadcastable arrays of unit complex numbers.
    The grid doubles until two successive estimates agree to
    ``spec.target_tol``; their difference is returned as the error.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    cap = min(spec.angular_points, int(round(budget ** (1.0 / k))))
    n = min(start, cap)
    prev = None
    evals = 0
    while True:
        pts = np.exp(2j * np.pi * np.arange(n) / n)
        grids = np.meshgrid(*([pts] * k), indexing="ij", sparse=True)
        vals = np.broadcast_to(f(*grids), (n,) * k)
        val = complex(vals.mean())
        evals += n**k
        if prev is not None:
            err = abs(val - prev)
            if err <= spec.target_tol or 2 * n > cap:
                return QuadResult(val, err, err <= spec.target_tol, evals)
        elif 2 * n > cap:
            return QuadResult(val, math.inf, False, evals)
        prev = val
        n *= 2


@functools.lru_cache(maxsize=32)
def _radial_rule(order: int):
    # Gauss-Jacobi with weight (1 + x) on [-1, 1], mapped to r = (1 + x)/2
    x, w = special.roots_jacobi(order, 0.0, 1.0)
    return 0.5 * (1.0 + x), 0.5 * w


def radial_integrate(g, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """``int_0^1 g(r) 2r dr``; exact for polynomials of degree <= 2*radial_order - 1."""
    r, w = _radial_rule(spec.radial_order)
    return float(np.sum(w * np.asarray(g(r), dtype=float)))


def disc_integrate(f, spec: QuadratureSpec = DEFAULT_SPEC, singular_point=None) -> QuadResult:
    """``int_D f(w) dA(w)`` with ``A(D) = 1``.

    Without a singular point this is a polar product rule (Gauss on ``2r dr``
    times an angular trapezoid).  With a flagged singular point ``w0`` inside
    the disc, polar coordinates are centred at ``w0`` instead so that
    singularities of type ``|w - w0|^sigma`` (sigma > -2) sit at the radial
    endpoint, where the tanh-sinh rule absorbs them.
    """
    n_ang = spec.angular_points
    if singular_point is None or abs(singular_point) >= 1:
        def polar(order, n):
            r, w = _radial_rule(order)
            phi = 2 * np.pi * np.arange(n) / n
            vals = f(r[:, None] * np.exp(1j * phi)[None, :])
            return complex(np.sum(w[:, None] * vals) / n)

        fine = polar(spec.radial_order, n_ang)
        rough = polar(max(2, spec.radial_order // 2), max(4, n_ang // 2))
        err = abs(fine - rough)
        return QuadResult(fine, err, err <= spec.target_tol, spec.radial_order * n_ang)

    w0 = complex(singular_point)

    def centred(n):
        phi = 2 * np.pi * np.arange(n) / n
        e = np.exp(1j * phi)
        proj = (w0 * np.conj(e)).real
        reach = -proj + np.sqrt(proj * proj + 1.0 - abs(w0) ** 2)
        breaks = np.stack([np.zeros(n), reach], axis=-1)
        eb = e[:, None, None]

        # below rho_min, w - w0 cannot be recovered from w to useful precision
        rho_min = 1e-15 * max(1.0, abs(w0))

        def radial(rho):
            return np.where(rho > rho_min, f(w0 + rho * eb) * rho, 0.0)

        re, rerr, _ = integrate_pieces(lambda r: radial(r).real, breaks, tol=spec.target_tol)
        im, ierr, _ = integrate_pieces(lambda r: radial(r).imag, breaks, tol=spec.target_tol)
        return complex(2.0 * np.sum(re + 1j * im) / n), float(2.0 * np.sum(rerr + ierr) / n)

    fine, ferr = centred(n_ang)
    rough, _ = centred(max(4, n_ang // 2))
    err = abs(fine - rough) + ferr
    return QuadResult(fine, err, err <= spec.target_tol, n_ang)
