"""Fourier coefficients of ``|zeta_1 + .. + zeta_d|^{p-2} (zeta_1 + .. + zeta_d)``.

Only frequencies with ``alpha_1 + .. + alpha_d = 1`` occur, by homogeneity.
For d = 2 there is a closed form in Gamma functions; for d = 3 there is none,
and coefficients come either from exact expansion (even p) or from a
one-dimensional integral built on :func:`circle_coefficient`.

Both tables obey a recursion in p obtained by multiplying with
``|psi|^2 = d + sum_{i != j} zeta_i conj(zeta_j)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy import special

from .polyalg import LaurentPoly, lp_conj
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_pieces

__all__ = [
    "CoeffTable",
    "c2_closed",
    "c2_quadrature",
    "c2_recursion_check",
    "c3_even",
    "c3_recurse",
    "c3_recursion_defect",
    "c3_quadrature",
    "c3_table",
    "circle_coefficient",
    "pyramid_slice",
]

C3_CAP = 64


@dataclass(frozen=True)
class CoeffTable:
    d: int
    p: float
    entries: dict

    def __post_init__(self):
        for a in self.entries:
            if len(a) != self.d or sum(a) != 1:
                raise ValueError(f"index {a} is not a length-{self.d} index summing to 1")

    def __getitem__(self, alpha):
        return self.entries.get(tuple(alpha), 0)

    def rows(self):
        return sorted(self.entries.items())


# ---------------------------------------------------------------------------
# two variables


def c2_closed(p: float, alpha1: int) -> float:
    """``Gamma(p) / (Gamma(p/2 + alpha_1) Gamma(p/2 + alpha_2))`` with ``alpha_2 = 1 - alpha_1``.

    The value is 0 when either argument is a nonpositive integer, as with
    reciprocal Gamma; logarithms keep large p from overflowing.
    """
    if not p >= 1:
        raise ValueError("p must be >= 1")
    a = 0.5 * p + alpha1
    b = 0.5 * p + 1 - alpha1
    if any(x <= 0 and x == math.floor(x) for x in (a, b)):
        return 0.0
    if p < 150 and abs(alpha1) < 150:
        return float(special.gamma(p) * special.rgamma(a) * special.rgamma(b))
    sign = special.gammasgn(p) * special.gammasgn(a) * special.gammasgn(b)
    return float(sign * math.exp(special.gammaln(p) - special.gammaln(a) - special.gammaln(b)))


def c2_quadrature(p: float, alpha1: int, tol: float = 1e-13) -> tuple[float, float]:
    """The same coefficient from its defining integral.

    Fixing ``zeta_2 = 1`` (the integrand is invariant under diagonal rotation)
    leaves ``(1/pi) int_0^pi (2 cos(t/2))^{p-1} cos((1/2 - alpha_1) t) dt``.
    Returns ``(value, error)``.
    """
    k = 0.5 - alpha1

    def f(t):
        return (2.0 * np.cos(0.5 * t)) ** (p - 1) * np.cos(k * t)

    val, err, _ = integrate_pieces(f, np.array([0.0, 0.5 * math.pi, math.pi]), tol=tol,
                                   max_refine=6)
    return float(val) / math.pi, float(err) / math.pi


def c2_recursion_check(p: float, alphas: Iterable[int]) -> float:
    """Largest defect of ``c_{p+2}(a) = 2 c_p(a) + c_p(a - e1 + e2) + c_p(a + e1 - e2)``."""
    worst = 0.0
    for a1 in alphas:
        lhs = c2_closed(p + 2, a1)
        rhs = 2 * c2_closed(p, a1) + c2_closed(p, a1 - 1) + c2_closed(p, a1 + 1)
        worst = max(worst, abs(lhs - rhs))
    return worst


# ---------------------------------------------------------------------------
# three variables, exact at even p


def _psi(d: int = 3) -> LaurentPoly:
    return LaurentPoly.linear([1] * d)


def c3_even(n: int, cap: int = C3_CAP) -> CoeffTable:
    """Exact table at ``p = 2n``: the coefficients of ``psi^n conj(psi)^{n-1}``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if 3 * n > cap:
        raise ValueError(f"3n = {3 * n} exceeds the expansion cap {cap}")
    psi = _psi()
    g = psi**n * lp_conj(psi) ** (n - 1)
    entries = {a: int(c.re) for a, c in g.items()}
    return CoeffTable(3, float(2 * n), entries)


def pyramid_slice(k: int) -> CoeffTable:
    """Slice ``k`` (odd) of the hexagonal Pascal pyramid, i.e. the table at ``p = k + 1``.

    Slices are numbered so that slice ``2n - 1`` belongs to ``p = 2n``; the
    OEIS numbering of the same array is offset by one.
    """
    if k < 1 or k % 2 == 0:
        raise ValueError("pyramid slices carrying coefficients have odd index")
    return c3_even((k + 1) // 2)


_NEIGHBOURS3 = [
    tuple((1 if t == i else -1 if t == j else 0) for t in range(3))
    for i in range(3) for j in range(3) if i != j
]


def c3_recurse(table: CoeffTable) -> CoeffTable:
    """Table at ``p + 2`` from the table at ``p``: ``3 c(a) + sum of the six neighbours``."""
    if table.d != 3:
        raise ValueError("c3_recurse needs a three-variable table")
    keys = set(table.entries)
    for a in table.entries:
        for e in _NEIGHBOURS3:
            keys.add(tuple(x + y for x, y in zip(a, e)))
    out = {}
    for a in keys:
        v = 3 * table[a]
        for e in _NEIGHBOURS3:
            v = v + table[tuple(x - y for x, y in zip(a, e))]
        if v != 0:
            out[a] = v
    return CoeffTable(3, table.p + 2, out)


def c3_recursion_defect(lower: CoeffTable, upper: CoeffTable) -> float:
    """Largest ``|upper(a) - recursion(lower)(a)|`` over the union of supports."""
    pred = c3_recurse(lower)
    keys = set(pred.entries) | set(upper.entries)
    return max((abs(upper[a] - pred[a]) for a in keys), default=0)


# ---------------------------------------------------------------------------
# three variables, any p


def circle_coefficient(R, m: int, p: float):
    """Fourier coefficient ``m`` of ``w -> |R + w|^{p-2} (R + w)`` on the unit circle, ``R >= 0``.

    Expanding both factors binomially (in ``w/R`` or ``R/w``, whichever is
    small) and collecting the frequency gives a single Gauss hypergeometric
    function with ``c - a - b = p``, so it stays finite at ``R = 1``.
    """
    R = np.asarray(R, dtype=float)
    h = 0.5 * p
    with np.errstate(all="ignore"):
        inside = R <= 1.0
        r2 = np.where(inside, R * R, 0.0)
        inv2 = np.where(inside, 0.0, 1.0 / np.where(R > 0, R * R, 1.0))
        if m >= 1:
            small = special.binom(h - 1, m - 1) * R ** (m - 1) * special.hyp2f1(-h, m - h, m, r2)
        else:
            small = special.binom(h, 1 - m) * R ** (1 - m) * special.hyp2f1(1 - m - h, 1 - h,
                                                                               2 - m, r2)
        if m >= 0:
            large = R ** (p - 1 - m) * special.binom(h, m) * special.hyp2f1(m - h, 1 - h, m + 1,
                                                                              inv2)
        else:
            k = -m
            large = R ** (p - 1 - k) * special.binom(h - 1, k) * special.hyp2f1(-h, k + 1 - h,
                                                                                 k + 1, inv2)
        return np.where(inside, small, large)


def c3_quadrature(p: float, alpha, spec: QuadratureSpec = DEFAULT_SPEC):
    """``int_{T^3} |psi|^{p-2} psi conj(zeta^alpha) dm_3`` for ``sum(alpha) = 1``.

    Fix ``zeta_3 = 1`` by diagonal invariance, write ``zeta_1 = e^{it}`` and
    ``1 + zeta_1 = 2 cos(t/2) e^{it/2}``; the remaining circle integral in
    ``zeta_2`` is :func:`circle_coefficient`.  What is left is a 1-D integral
    over ``t`` with kinks where ``2 cos(t/2) = 1``.  Returns
    ``(real part, imaginary part, error)``; the imaginary part vanishes in
    exact arithmetic.
    """
    a1, a2, a3 = (int(x) for x in alpha)
    if a1 + a2 + a3 != 1:
        raise ValueError("alpha must sum to 1")
    if not p >= 1:
        raise ValueError("p must be >= 1")
    freq = 0.5 * (1 - a2) - a1

    def kernel(t):
        return circle_coefficient(2.0 * np.cos(0.5 * t), a2, p) / (2.0 * math.pi)

    breaks = np.array([-math.pi, -2 * math.pi / 3, 0.0, 2 * math.pi / 3, math.pi])
    tol = max(spec.target_tol * 1e-4, 1e-13)
    re, rerr, ok1 = integrate_pieces(lambda t: kernel(t) * np.cos(freq * t), breaks, tol=tol,
                                     max_refine=spec.max_refine + 2)
    im, ierr, ok2 = integrate_pieces(lambda t: kernel(t) * np.sin(freq * t), breaks, tol=tol,
                                     max_refine=spec.max_refine + 2)
    return float(re), float(im), float(rerr + ierr)


def c3_table(p: float, radius: int = 2, spec: QuadratureSpec = DEFAULT_SPEC) -> CoeffTable:
    """Quadrature table on indices with ``|alpha_i| <= radius``."""
    entries = {}
    rng = range(-radius, radius + 1)
    for a1 in rng:
        for a2 in rng:
            a3 = 1 - a1 - a2
            if abs(a3) <= radius:
                entries[(a1, a2, a3)] = c3_quadrature(p, (a1, a2, a3), spec)[0]
    return CoeffTable(3, float(p), entries)
