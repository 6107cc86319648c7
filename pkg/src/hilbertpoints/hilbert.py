"""Deciding whether a polynomial is a Hilbert point in H^p.

The test is the duality criterion ``P(|phi|^{p-2} phi) = lambda phi``.
Pairing both sides with ``phi`` forces ``lambda = ||phi||_p^p / ||phi||_2^2``,
so the residual of that equation is a well-defined number.

Three routes compute the residual:

* even exact: at ``p = 2n + 2`` the projection is a finite polynomial
  computation, so the residual is an exact rational;
* quadrature: numerically, with an error estimate that decides the verdict;
* infinity closed form: for linear ``phi`` at ``p = inf``.

Quadrature verdicts use ``E = max(error estimate, 1e-12)``.  A residual up to
``10 E`` counts as a Hilbert point, one above ``100 E`` does not, and
anything in between is reported as inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .polyalg import (
    GaussianRational,
    LaurentPoly,
    h2_inner,
    hp_norm_even_power,
    nonlinear_image_even,
)
from .projection import (
    as_coeffs,
    ij_integrals,
    linear_norm_power,
    linear_norm_power_even,
    project_linear,
    project_linear_even,
)
from .quadrature import DEFAULT_SPEC, QuadratureSpec

__all__ = [
    "HilbertReport",
    "HILBERT_POINT",
    "NOT_HILBERT_POINT",
    "INCONCLUSIVE",
    "TERM_CAP",
    "lambda_expected",
    "residual_linear",
    "residual_even_poly",
    "residual_grid",
    "hilbert_infinity_linear",
    "check",
    "verdict_from_residual",
]

HILBERT_POINT = "hilbert-point"
NOT_HILBERT_POINT = "not-hilbert-point"
INCONCLUSIVE = "inconclusive"

ERROR_FLOOR = 1e-12
TERM_CAP = 200_000
GRID_BUDGET = 2**22


@dataclass
class HilbertReport:
    p: float
    lambda_expected: float
    residual: float
    verdict: str
    method: str
    error_estimate: float = 0.0
    exact_residual_squared: Fraction | None = None
    note: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "p": _json_p(self.p),
            "lambda_expected": float(self.lambda_expected),
            "residual": float(self.residual),
            "verdict": self.verdict,
            "method": self.method,
            "error_estimate": float(self.error_estimate),
        }
        if self.exact_residual_squared is not None:
            out["exact_residual_squared"] = str(self.exact_residual_squared)
        if self.note:
            out["note"] = self.note
        out.update(self.extra)
        return out


def _json_p(p):
    return "inf" if math.isinf(p) else float(p)


def verdict_from_residual(residual: float, error: float) -> str:
    e = max(error, ERROR_FLOOR)
    if residual <= 10 * e:
        return HILBERT_POINT
    if residual <= 100 * e:
        return INCONCLUSIVE
    return NOT_HILBERT_POINT


def _even_n(p) -> int | None:
    """``n`` with ``p = 2n + 2`` when p is an even integer >= 2, else None."""
    if math.isinf(p):
        return None
    if float(p) == int(p) and int(p) >= 2 and int(p) % 2 == 0:
        return int(p) // 2 - 1
    return None


def _is_linear(f: LaurentPoly) -> bool:
    return all(sum(a) == 1 and min(a) >= 0 for a in f.terms)


def _linear_coeffs(f: LaurentPoly) -> list:
    out = [0] * f.dim
    for a, c in f.items():
        out[a.index(1)] = c
    return out


# ---------------------------------------------------------------------------
# lambda


def lambda_expected(phi, p: float, spec: QuadratureSpec = DEFAULT_SPEC):
    """``||phi||_p^p / ||phi||_2^2``; exact (a Fraction) on the even route with exact input."""
    if isinstance(phi, LaurentPoly):
        if phi.is_zero():
            raise ValueError("phi must be nontrivial")
        if not phi.is_analytic():
            raise ValueError("phi must be analytic")
        n = _even_n(p)
        if n is not None:
            den = h2_inner(phi, phi)
            return hp_norm_even_power(phi, n + 1) / (den.re if phi.exact else den.real)
        if _is_linear(phi):
            return lambda_expected(_linear_coeffs(phi), p, spec)
        val, _ = _grid_norm_power(phi, p, _grid_size(phi, spec))
        return val / _h2_norm2(phi)
    n = _even_n(p)
    if n is not None:
        num = linear_norm_power_even(phi, n + 1)
        den = sum(_abs2_any(x) for x in phi)
        if den == 0:
            raise ValueError("phi must be nontrivial")
        return num / den
    c = as_coeffs(phi)
    den = float(np.sum(np.abs(c) ** 2))
    if den == 0:
        raise ValueError("phi must be nontrivial")
    val, _ = linear_norm_power(c, p, spec)
    return val / den


def _abs2_any(x):
    if isinstance(x, GaussianRational):
        return x.abs2()
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Fraction(x) ** 2
    return abs(complex(x)) ** 2


def _h2_norm2(f: LaurentPoly) -> float:
    return float(sum(abs(complex(c)) ** 2 for c in f.terms.values()))


# ---------------------------------------------------------------------------
# linear phi


def residual_linear(c, p: float, spec: QuadratureSpec = DEFAULT_SPEC,
                    exact: bool = False) -> HilbertReport:
    """Residual ``||P(|phi|^{p-2}phi) - lambda phi|| / ||lambda phi||`` for linear phi.

    With ``exact=True`` and even p the multinomial formula is used and the
    verdict is exact.
    """
    if math.isinf(p):
        return hilbert_infinity_linear(c)
    n = _even_n(p)
    if exact:
        if n is None:
            raise ValueError("the exact route needs an even integer p >= 2")
        return _residual_linear_exact(c, n)
    arr = as_coeffs(c)
    if not np.any(arr != 0):
        raise ValueError("coefficient vector must be nontrivial")
    norm2 = float(np.sum(np.abs(arr) ** 2))
    ij = ij_integrals(arr, p, spec)
    out = project_linear(arr, p, spec, ij=ij)
    npow, npow_err = linear_norm_power(arr, p, spec)
    lam = npow / norm2
    lam_err = npow_err / norm2
    scale = lam * math.sqrt(norm2)
    resid = float(np.linalg.norm(out - lam * arr)) / scale
    nz = arr != 0
    out_err = float(np.linalg.norm(0.5 * p * np.abs(arr[nz]) * ij.error_estimates[nz]))
    err = (out_err + lam_err * math.sqrt(norm2)) / scale
    return HilbertReport(float(p), lam, resid, verdict_from_residual(resid, err), "quadrature",
                         err, extra={"ij": [float(v) for v in ij.values]})


def _residual_linear_exact(c, n: int) -> HilbertReport:
    out = project_linear_even(c, n)
    lam = lambda_expected(list(c), 2 * n + 2)
    cs = [x if isinstance(x, GaussianRational) else _maybe_exact(x) for x in c]
    diff = [o - lam * x for o, x in zip(out, cs)]
    num = sum(_abs2_any(v) for v in diff)
    den = lam * lam * sum(_abs2_any(x) for x in cs)
    r2 = num / den
    exact = isinstance(r2, Fraction)
    resid = math.sqrt(float(r2))
    if exact:
        verdict = HILBERT_POINT if r2 == 0 else NOT_HILBERT_POINT
    else:
        verdict = verdict_from_residual(resid, 0.0)
    return HilbertReport(float(2 * n + 2), float(lam), resid, verdict, "even-exact", 0.0,
                         r2 if exact else None)


def _maybe_exact(x):
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return GaussianRational(x)
    return complex(x)


def hilbert_infinity_linear(c) -> HilbertReport:
    """p = inf for linear phi: Hilbert point iff ``max|c_j| * sum|c_j| = sum|c_j|^2``."""
    vals = list(c)
    if all(isinstance(x, (int, Fraction)) and not isinstance(x, bool) for x in vals):
        mods = [abs(Fraction(x)) for x in vals]
        exact = True
    else:
        mods = [abs(complex(x)) for x in vals]
        exact = False
    total = sum(mods)
    if total == 0:
        raise ValueError("coefficient vector must be nontrivial")
    sq = sum(m * m for m in mods)
    lhs = max(mods) * total
    resid = abs(lhs - sq) / sq
    if exact:
        verdict = HILBERT_POINT if resid == 0 else NOT_HILBERT_POINT
    else:
        verdict = HILBERT_POINT if resid <= 1e-12 else NOT_HILBERT_POINT
    return HilbertReport(math.inf, float(lhs / sq), float(resid), verdict,
                         "infinity-closed-form", 0.0,
                         resid * resid if exact else None)


# ---------------------------------------------------------------------------
# general polynomials


def residual_even_poly(f: LaurentPoly, n: int, term_cap: int = TERM_CAP) -> HilbertReport:
    """Exact test at ``p = 2n + 2`` for an analytic polynomial ``f``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not f.is_analytic():
        raise ValueError("f must be analytic")
    if f.is_zero():
        raise ValueError("f must be nontrivial")
    if len(f) ** (2 * n + 1) > term_cap:
        raise ValueError(
            f"expansion of {len(f)} terms to power {2 * n + 1} exceeds the term cap {term_cap}"
        )
    image = nonlinear_image_even(f, n)
    lam = lambda_expected(f, 2 * n + 2)
    diff = image - f * lam if f.exact else image - f * float(lam)
    num = h2_inner(diff, diff)
    den = h2_inner(f, f)
    if f.exact:
        r2 = num.re / (lam * lam * den.re)
        resid = math.sqrt(float(r2))
        verdict = HILBERT_POINT if r2 == 0 else NOT_HILBERT_POINT
        return HilbertReport(float(2 * n + 2), float(lam), resid, verdict, "even-exact", 0.0, r2)
    resid = math.sqrt(abs(num) / (float(lam) ** 2 * abs(den)))
    return HilbertReport(float(2 * n + 2), float(lam), resid,
                         verdict_from_residual(resid, 0.0), "even-exact", 0.0,
                         note="floating-point coefficients; verdict uses the error floor")


def _grid_size(f: LaurentPoly, spec: QuadratureSpec) -> int:
    deg = max(max(a) for a in f.terms)
    cap = 2 ** (int(math.log2(GRID_BUDGET)) // f.dim)
    n = 8
    while n < 4 * (deg + 1):
        n *= 2
    n = max(n, min(spec.angular_points, cap))
    while n > cap:
        n //= 2
    if n < 4 * (deg + 1):
        raise ValueError(f"degree {deg} in {f.dim} variables exceeds the grid budget")
    return n


def _grid_values(f: LaurentPoly, n: int) -> np.ndarray:
    pts = np.exp(2j * np.pi * np.arange(n) / n)
    grids = np.meshgrid(*([pts] * f.dim), indexing="ij", sparse=True)
    return np.broadcast_to(f.evaluate(*grids), (n,) * f.dim)


def _grid_norm_power(f: LaurentPoly, p: float, n: int):
    vals = np.abs(_grid_values(f, n)) ** p
    coarse = vals[(slice(None, None, 2),) * f.dim]
    return float(vals.mean()), float(abs(vals.mean() - coarse.mean()))


def _grid_projection(f: LaurentPoly, p: float, n: int):
    """Analytic Fourier coefficients of ``|f|^{p-2} f`` from an n-point grid."""
    v = _grid_values(f, n)
    mod = np.abs(v)
    with np.errstate(all="ignore"):
        g = np.where(mod > 0, mod ** (p - 2) * v, 0.0)
    coef = np.fft.fftn(g) / g.size
    analytic = coef[(slice(0, n // 2),) * f.dim]
    return analytic


def residual_grid(f: LaurentPoly, p: float, spec: QuadratureSpec = DEFAULT_SPEC) -> HilbertReport:
    """Residual from a tensor FFT grid; used for nonlinear polynomials at non-even p.

    Exact for monomials (``|f|`` is constant).  The error estimate compares the
    grid with its half-density subgrid, so slow convergence near zeros of f
    shows up as a large error and an inconclusive verdict.
    """
    if not f.is_analytic() or f.is_zero():
        raise ValueError("f must be a nontrivial analytic polynomial")
    n = _grid_size(f, spec)
    norm2 = _h2_norm2(f)
    npow, npow_err = _grid_norm_power(f, p, n)
    lam = npow / norm2

    def resid_at(m):
        proj = _grid_projection(f, p, m)
        target = np.zeros_like(proj)
        for a, c in f.items():
            target[a] = complex(c)
        lam_m = _grid_norm_power(f, p, m)[0] / norm2
        return float(np.linalg.norm(proj - lam_m * target)) / (lam_m * math.sqrt(norm2))

    resid = resid_at(n)
    err = abs(resid - resid_at(n // 2)) + npow_err / npow
    return HilbertReport(float(p), lam, resid, verdict_from_residual(resid, err), "quadrature", err,
                         note=f"FFT grid {n}^{f.dim}")


def check(f: LaurentPoly, p: float, spec: QuadratureSpec = DEFAULT_SPEC,
          exact: bool = False) -> HilbertReport:
    """Pick the right route for ``f`` at exponent ``p`` (``math.inf`` allowed)."""
    if not f.is_analytic():
        raise ValueError("Hilbert points are analytic; f has negative exponents")
    if f.is_zero():
        raise ValueError("f must be nontrivial")
    linear = _is_linear(f)
    if math.isinf(p):
        if linear:
            return hilbert_infinity_linear(_linear_coeffs(f))
        if len(f) == 1:
            # a single term has constant modulus on the torus, i.e. it is inner
            return HilbertReport(math.inf, 1.0, 0.0, HILBERT_POINT, "infinity-closed-form", 0.0,
                                 note="monomial: constant modulus on the torus")
        return HilbertReport(math.inf, math.nan, math.nan, INCONCLUSIVE, "infinity-closed-form",
                             math.nan, note="p = inf is decided only for linear polynomials")
    if not p >= 1:
        raise ValueError("p must be >= 1")
    n = _even_n(p)
    if p == 2:
        return HilbertReport(2.0, 1.0, 0.0, HILBERT_POINT, "even-exact", 0.0,
                             Fraction(0) if f.exact else None,
                             note="every nontrivial function is a Hilbert point at p = 2")
    if exact:
        if n is None:
            raise ValueError("--exact needs an even integer p")
        return residual_even_poly(f, n)
    if linear:
        return residual_linear(_linear_coeffs(f), p, spec)
    return residual_grid(f, p, spec)
