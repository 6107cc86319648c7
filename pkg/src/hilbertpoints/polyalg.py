"""Sparse Laurent polynomials on the d-torus.

A trigonometric polynomial is stored through its Fourier series: a finite map
from integer exponent tuples ``alpha`` to complex coefficients.  Coefficients
are kept exact (Gaussian rationals) whenever every input was exact, and fall
back to Python ``complex`` otherwise.  On the torus ``conj(z_j) = 1/z_j``, so
products of polynomials and their conjugates stay inside this class, which is
what makes the even-exponent computations exact.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping

__all__ = [
    "GaussianRational",
    "LaurentPoly",
    "DimensionMismatch",
    "compositions",
    "multinomial",
    "lp_mul",
    "lp_conj",
    "riesz_project",
    "h2_inner",
    "hp_norm_even",
    "hp_norm_even_power",
    "nonlinear_image_even",
]

FLOAT_PRUNE = 1e-15


class DimensionMismatch(ValueError):
    """Raised when polynomials on tori of different dimension are combined."""


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value, 0)
        raise TypeError(f"cannot make {value!r} exact")

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return self.im == 0 and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, (GaussianRational, int, Rational)):
            o = GaussianRational.coerce(other)
            return GaussianRational(self.re + o.re, self.im + o.im)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (GaussianRational, int, Rational)):
            o = GaussianRational.coerce(other)
            return GaussianRational(
                self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
            )
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (GaussianRational, int, Rational)):
            o = GaussianRational.coerce(other)
            n = o.abs2()
            if n == 0:
                raise ZeroDivisionError("division by zero")
            return self * GaussianRational(o.re / n, -o.im / n)
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return NotImplemented

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return math.sqrt(self.abs2())


def _coerce_coeff(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, bool):
        return GaussianRational(int(value))
    if isinstance(value, (int, Rational)):
        return GaussianRational(value)
    if isinstance(value, (float, complex)):
        return complex(value)
    # numpy scalars and the like
    return complex(value)


def _is_exact(value) -> bool:
    return isinstance(value, GaussianRational)


def _abs2(value):
    if isinstance(value, GaussianRational):
        return value.abs2()
    return value.real * value.real + value.imag * value.imag


def _conj(value):
    return value.conjugate()


def compositions(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """Yield every multi-index of length ``d`` with nonnegative entries summing to ``n``."""
    if d < 1 or n < 0:
        return
    for bars in itertools.combinations(range(n + d - 1), d - 1):
        prev = -1
        alpha = []
        for b in bars:
            alpha.append(b - prev - 1)
            prev = b
        alpha.append(n + d - 2 - prev)
        yield tuple(alpha)


def multinomial(alpha: Iterable[int]) -> int:
    """Multinomial coefficient ``|alpha|! / prod(alpha_j!)``."""
    total = 0
    result = 1
    for a in alpha:
        total += a
        result *= math.comb(total, a)
    return result


class LaurentPoly:
    """Finite Fourier series ``sum_alpha f(alpha) z^alpha`` on the d-torus.

    Terms are stored sorted by exponent (lexicographic) with zero coefficients
    removed.  Instances are immutable value objects.
    """

    __slots__ = ("dim", "_terms", "_exact")

    def __init__(self, dim: int, terms: Mapping[tuple[int, ...], object] | None = None):
        if dim < 1:
            raise ValueError("dimension must be at least 1")
        self.dim = int(dim)
        raw = {}
        for alpha, coef in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.dim:
                raise DimensionMismatch(
                    f"exponent {alpha} has length {len(alpha)}, expected {self.dim}"
                )
            c = _coerce_coeff(coef)
            raw[alpha] = raw[alpha] + c if alpha in raw else c
        exact = all(_is_exact(c) for c in raw.values())
        if not exact:
            raw = {a: complex(c) for a, c in raw.items()}
        self._exact = exact
        self._terms = _prune(raw, exact)

    # construction helpers

    @classmethod
    def monomial(cls, dim: int, alpha: Iterable[int], coef=1) -> "LaurentPoly":
        return cls(dim, {tuple(alpha): coef})

    @classmethod
    def constant(cls, dim: int, value=1) -> "LaurentPoly":
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def linear(cls, coeffs: Iterable) -> "LaurentPoly":
        """The 1-homogeneous polynomial ``sum_j c_j z_j``."""
        coeffs = list(coeffs)
        d = len(coeffs)
        terms = {}
        for j, c in enumerate(coeffs):
            alpha = tuple(1 if k == j else 0 for k in range(d))
            terms[alpha] = c
        return cls(d, terms)

    # read access

    @property
    def terms(self) -> dict[tuple[int, ...], object]:
        return dict(self._terms)

    @property
    def exact(self) -> bool:
        return self._exact

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def coefficient(self, alpha: Iterable[int]):
        alpha = tuple(alpha)
        if alpha in self._terms:
            return self._terms[alpha]
        return GaussianRational(0) if self._exact else 0j

    def is_zero(self) -> bool:
        return not self._terms

    def is_analytic(self) -> bool:
        return all(min(alpha) >= 0 for alpha in self._terms)

    def degrees(self) -> set[int]:
        return {sum(alpha) for alpha in self._terms}

    def to_complex(self) -> "LaurentPoly":
        return LaurentPoly(self.dim, {a: complex(c) for a, c in self._terms.items()})

    def evaluate(self, *z):
        """Evaluate at points of the torus (numpy broadcasting over ``z``)."""
        import numpy as np

        if len(z) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} variables")
        out = 0j
        for alpha, c in self._terms.items():
            term = complex(c)
            for zj, a in zip(z, alpha):
                if a:
                    term = term * np.asarray(zj) ** a
            out = out + term
        return out

    # arithmetic

    def _check(self, other: "LaurentPoly"):
        if not isinstance(other, LaurentPoly):
            raise TypeError("expected LaurentPoly")
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimensions {self.dim} and {other.dim} differ")

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(self.dim, other)
        self._check(other)
        terms = dict(self._terms)
        for a, c in other._terms.items():
            terms[a] = terms[a] + c if a in terms else c
        return LaurentPoly(self.dim, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.dim, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return lp_mul(self, other)
        c = _coerce_coeff(other)
        return LaurentPoly(self.dim, {a: v * c for a, v in self._terms.items()})

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = LaurentPoly.constant(self.dim, 1)
        base = self
        while n:
            if n & 1:
                result = lp_mul(result, base)
            n >>= 1
            if n:
                base = lp_mul(base, base)
        return result

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if self.dim != other.dim or self._terms.keys() != other._terms.keys():
            return False
        return all(self._terms[a] == other._terms[a] for a in self._terms)

    def __hash__(self):
        return hash((self.dim, tuple(self._terms.items())))

    def __repr__(self):
        return f"LaurentPoly({self.dim}, {self._terms!r})"

    def conj(self) -> "LaurentPoly":
        return lp_conj(self)

    # serialization

    def to_json(self) -> dict:
        terms = []
        for alpha, c in self._terms.items():
            if isinstance(c, GaussianRational):
                re, im = _json_number(c.re), _json_number(c.im)
            else:
                re, im = c.real, c.imag
            terms.append({"alpha": list(alpha), "re": re, "im": im})
        return {"dim": self.dim, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        terms = {}
        for t in data["terms"]:
            re, im = _parse_json_number(t["re"]), _parse_json_number(t["im"])
            if isinstance(re, float) or isinstance(im, float):
                terms[tuple(t["alpha"])] = complex(float(re), float(im))
            else:
                terms[tuple(t["alpha"])] = GaussianRational(re, im)
        return cls(int(data["dim"]), terms)


def _json_number(q: Fraction):
    # integers stay JSON integers; other rationals become "p/q" strings
    if q.denominator == 1:
        return int(q)
    return f"{q.numerator}/{q.denominator}"


def _parse_json_number(v):
    if isinstance(v, bool):
        raise TypeError("boolean is not a coefficient")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    return float(v)


def _prune(raw: dict, exact: bool) -> dict:
    if exact:
        kept = {a: c for a, c in raw.items() if c}
    else:
        scale = max((abs(c) for c in raw.values()), default=0.0)
        cut = FLOAT_PRUNE * scale
        kept = {a: c for a, c in raw.items() if abs(c) > cut}
    return dict(sorted(kept.items()))


def lp_mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Product of two Laurent polynomials (coefficient convolution)."""
    f._check(g)
    out: dict = {}
    for a, ca in f._terms.items():
        for b, cb in g._terms.items():
            key = tuple(x + y for x, y in zip(a, b))
            v = ca * cb
            out[key] = out[key] + v if key in out else v
    return LaurentPoly(f.dim, out)


def lp_conj(f: LaurentPoly) -> LaurentPoly:
    """Complex conjugate on the torus: exponents negate, coefficients conjugate."""
    return LaurentPoly(
        f.dim, {tuple(-x for x in a): _conj(c) for a, c in f._terms.items()}
    )


def riesz_project(f: LaurentPoly) -> LaurentPoly:
    """Keep the terms whose exponents are all nonnegative."""
    return LaurentPoly(f.dim, {a: c for a, c in f._terms.items() if min(a) >= 0})


def h2_inner(f: LaurentPoly, g: LaurentPoly):
    """L^2(T^d) inner product ``sum f(alpha) * conj(g(alpha))``."""
    f._check(g)
    total = GaussianRational(0) if (f.exact and g.exact) else 0j
    for a, c in f._terms.items():
        if a in g._terms:
            total = total + c * _conj(g._terms[a])
    return total


def hp_norm_even_power(f: LaurentPoly, n: int):
    """``||f||_{2n}^{2n}``, computed as ``||f^n||_2^2``; a Fraction for exact input."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not f.is_analytic():
        raise ValueError("hp_norm_even expects an analytic polynomial")
    g = f**n
    total = Fraction(0) if g.exact else 0.0
    for c in g._terms.values():
        total += _abs2(c)
    return total


def hp_norm_even(f: LaurentPoly, n: int) -> float:
    """The H^{2n} norm of an analytic polynomial."""
    power = hp_norm_even_power(f, n)
    return float(power) ** (1.0 / (2 * n))


def nonlinear_image_even(f: LaurentPoly, n: int) -> LaurentPoly:
    """``P(|f|^{2n} f) = P(f^{n+1} conj(f)^n)``, the nonlinear projection at ``p = 2n + 2``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if not f.is_analytic():
        raise ValueError("nonlinear_image_even expects an analytic polynomial")
    return riesz_project(lp_mul(f ** (n + 1), lp_conj(f) ** n))
