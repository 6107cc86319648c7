import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from hilbertpoints.polyalg import GaussianRational, LaurentPoly, h2_inner
from hilbertpoints.quadrature import (
    DEFAULT_SPEC,
    QuadratureError,
    QuadratureSpec,
    QuadResult,
    disc_integrate,
    disc_modulus_integral,
    integrate_pieces,
    radial_integrate,
    ring_integral,
    ring_kernel,
    torus_integrate,
)


def mp_ring(a, b, s):
    f = lambda t: abs(a + b * mpmath.expj(t)) ** s  # noqa: E731
    with mpmath.workdps(30):
        return float(mpmath.quad(f, [0, mpmath.pi, 2 * mpmath.pi]) / (2 * mpmath.pi))


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(angular_points=2)
    with pytest.raises(ValueError):
        QuadratureSpec(radial_order=1)
    with pytest.raises(ValueError):
        QuadratureSpec(target_tol=0)
    assert DEFAULT_SPEC == QuadratureSpec(256, 64, 1e-6, 4)
    assert DEFAULT_SPEC.with_(angular_points=64).angular_points == 64


def test_result_require():
    ok = QuadResult(1.0, 0.0, True, 1)
    assert ok.require() is ok
    with pytest.raises(QuadratureError) as exc:
        QuadResult(1.0, 1.0, False, 1).require()
    assert exc.value.best.value == 1.0


def test_torus_examples():
    assert torus_integrate(lambda z1: np.ones_like(z1), 1).value == pytest.approx(1)
    assert abs(torus_integrate(lambda z1, z2: z1 * np.conj(z2), 2).value) < 1e-15
    assert torus_integrate(lambda z1, z2: abs(z1 + z2) ** 2, 2).value == pytest.approx(2)


def test_radial_examples():
    assert radial_integrate(lambda r: np.ones_like(r)) == pytest.approx(1, abs=1e-14)
    assert radial_integrate(lambda r: r**2) == pytest.approx(0.5, abs=1e-14)
    for n in range(1, 20):
        assert radial_integrate(lambda r: r ** (2 * n)) == pytest.approx(1 / (n + 1), abs=1e-14)


def test_ring_examples():
    a, b = complex(0.3, -0.4), complex(-1.1, 0.2)
    assert ring_integral(a, b, 2) == pytest.approx(abs(a) ** 2 + abs(b) ** 2, rel=1e-14)
    assert ring_integral(a, b, 0) == 1
    # brute-force 1-D quadrature of |1 + z/2|
    ref, _ = integrate.quad(lambda t: abs(1 + 0.5 * np.exp(1j * t)), 0, 2 * math.pi,
                            epsabs=1e-13, epsrel=1e-13)
    assert ring_integral(1, 0.5, 1) == pytest.approx(ref / (2 * math.pi), abs=1e-10)


@pytest.mark.parametrize("s", [-1.5, -1.0, -0.5, 0.5, 1.0, 3.3])
@pytest.mark.parametrize("t", [0.0, 0.3, 0.9, 0.99, 0.9995, 0.999999])
def test_ring_against_mpmath(s, t):
    a, b = 1.0, math.sqrt(t)
    assert ring_integral(a, b, s) == pytest.approx(mp_ring(a, b, s), rel=1e-11)


def test_ring_errors_and_limits():
    with pytest.raises(ValueError):
        ring_integral(1, 1, -2)
    with pytest.raises(ValueError):
        ring_integral(0, 0, -1)
    assert ring_integral(0, 0, 1) == 0
    assert ring_integral(1, 1, -1) == math.inf
    assert ring_integral(2, 0, -1.5) == pytest.approx(2**-1.5)


def test_ring_kernel_vectorized():
    M = np.array([1.0, 2.0, 0.5])
    m = np.array([0.5, 1.0, 0.1])
    got = ring_kernel(M, m, 1.3)
    want = [ring_integral(x, y, 1.3) for x, y in zip(M, m)]
    assert np.allclose(got, want, rtol=1e-13)


moduli = st.floats(0.05, 3.0)
phases = st.floats(0, 2 * math.pi)
powers = st.floats(-1.9, 6.0).filter(lambda s: abs(s + 1) > 1e-3)


@given(moduli, moduli, phases, phases, powers)
def test_ring_symmetric_and_phase_free(a, b, t1, t2, s):
    if abs(a - b) < 1e-6 and s <= -1:
        return
    base = ring_integral(a, b, s)
    assert ring_integral(b, a, s) == pytest.approx(base, rel=1e-12)
    rotated = ring_integral(a * complex(math.cos(t1), math.sin(t1)),
                            b * complex(math.cos(t2), math.sin(t2)), s)
    assert rotated == pytest.approx(base, rel=1e-12)


@given(moduli, moduli, st.integers(0, 6))
def test_ring_even_expansion(a, b, n):
    exact = sum(math.comb(n, j) ** 2 * a ** (2 * (n - j)) * b ** (2 * j) for j in range(n + 1))
    assert ring_integral(a, b, 2 * n) == pytest.approx(exact, rel=1e-12)


def test_disc_examples():
    assert disc_integrate(lambda w: np.ones_like(w)).value == pytest.approx(1, abs=1e-13)
    assert disc_integrate(lambda w: abs(w) ** 2).value == pytest.approx(0.5, abs=1e-13)
    assert disc_integrate(lambda w: (1 - abs(w) ** 2) ** 2).value == pytest.approx(1 / 3, abs=1e-13)


@pytest.mark.parametrize("sigma", [-1.5, -1.0, -0.5, 0.7])
def test_disc_singular_point(sigma):
    w0 = complex(0.3, 0.2)
    res = disc_integrate(lambda w: abs(w - w0) ** sigma, singular_point=w0)
    ref, _, _ = disc_modulus_integral(lambda sig, X: sig**sigma, 1.0, abs(w0), tol=1e-13)
    assert res.value.real == pytest.approx(ref, rel=1e-7)
    assert abs(res.value - ref) <= max(res.error, 1e-12) * 10


def test_disc_modulus_matches_polar_rule():
    X = 1.7
    ref = disc_integrate(lambda w: abs(w + X) ** 3).value.real
    val, err, ok = disc_modulus_integral(lambda sig, _X: sig**3, 1.0, X, tol=1e-13)
    assert ok and val == pytest.approx(ref, rel=1e-12)


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3)),
                min_size=1, max_size=4))
def test_torus_matches_parseval(terms):
    f = LaurentPoly(2, {(a, b): GaussianRational(c) for a, b, c in terms})
    res = torus_integrate(lambda z1, z2: abs(f.evaluate(z1, z2)) ** 2, 2)
    assert res.value.real == pytest.approx(float(h2_inner(f, f).re), abs=1e-12)


def _random_case(rng):
    """One known integral; singular points sit at 0 and kinks at breakpoints,
    the two forms the library feeds to the rule."""
    kind = int(rng.integers(5))
    b = rng.uniform(0.5, 3)
    a = -rng.uniform(0.5, 2)
    if kind == 0:
        s = rng.uniform(-0.95, 2)
        return (lambda x: x**s), [0, b], b ** (s + 1) / (s + 1)
    if kind == 1:
        c = rng.uniform(a, b)
        return (lambda x: np.abs(x - c)), [a, c, b], 0.5 * ((c - a) ** 2 + (b - c) ** 2)
    if kind == 2:
        w = rng.uniform(1, 20)
        return (lambda x: np.cos(w * x)), [a, b], (math.sin(w * b) - math.sin(w * a)) / w
    if kind == 3:
        s = rng.uniform(-0.95, 0)
        return (lambda x: x**s * np.log(x)), [0, 1], -1 / (s + 1) ** 2
    g = rng.uniform(1, 30)
    r = math.sqrt(g)
    return (lambda x: 1 / (1 + g * x * x)), [a, b], (math.atan(r * b) - math.atan(r * a)) / r


def test_error_estimates_conservative():
    rng = np.random.default_rng(2024)
    hits = total = 0
    for _ in range(200):
        f, breaks, exact = _random_case(rng)
        for tol in (1e-6, 1e-10):
            val, err, _ = integrate_pieces(f, np.array(breaks, dtype=float), tol=tol)
            total += 1
            hits += abs(val - exact) <= max(err, 1e-14)
    assert hits >= 0.95 * total
