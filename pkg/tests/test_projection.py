import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hilbertpoints.polyalg import GaussianRational, LaurentPoly, nonlinear_image_even
from hilbertpoints.projection import (
    EnumerationCapExceeded,
    ij_integral,
    ij_integrals,
    linear_norm_power,
    linear_norm_power_even,
    normalized_op,
    project_linear,
    project_linear_even,
)


def mp_i1_two(a, b, p):
    """I_1 for c = (a, b) by nested mpmath quadrature of the defining integral."""
    s = p - 2

    def ring(r):
        f = lambda t: abs(a * r + b * mpmath.expj(t)) ** s  # noqa: E731
        return mpmath.quad(f, [0, mpmath.pi, 2 * mpmath.pi]) / (2 * mpmath.pi)

    breaks = [0, b / a, 1] if b < a else [0, 1]
    with mpmath.workdps(20):
        return float(mpmath.quad(lambda r: ring(r) * 2 * r, breaks))


# examples


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0, 4.0, 7.5])
def test_single_coordinate(p):
    assert ij_integral([1, 0, 0], p, 0) == pytest.approx(2 / p, rel=1e-12)
    out = project_linear([1, 0, 0], p)
    assert np.allclose(out, [1, 0, 0], atol=1e-13)


def test_p4_closed_forms():
    a, b = 0.7, 0.4
    assert ij_integral([a, b], 4, 0) == pytest.approx(a * a / 2 + b * b, rel=1e-12)
    out = project_linear([a, b], 4)
    assert np.allclose(out, [a * (a * a + 2 * b * b), b * (2 * a * a + b * b)], rtol=1e-12)
    c = np.array([1, 1]) / math.sqrt(2)
    assert np.allclose(project_linear(c, 4), 1.5 * c, rtol=1e-12)


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0, 5.5])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_equal_moduli_give_equal_integrals(p, d):
    c = np.exp(1j * np.arange(d)) / math.sqrt(d)
    ij = ij_integrals(c, p)
    assert np.ptp(ij.values) < 1e-8
    assert np.allclose(normalized_op(c, p), c, atol=1e-10)


def test_even_examples():
    c = [Fraction(1, 3), GaussianRational(0, Fraction(2, 5))]
    assert project_linear_even(c, 0) == [GaussianRational.coerce(x) for x in c]
    a, b = Fraction(3, 7), Fraction(5, 11)
    assert project_linear_even([a, b], 1) == [a * (a * a + 2 * b * b), b * (2 * a * a + b * b)]
    assert project_linear_even([1, 1, 1], 1) == [5, 5, 5]


def test_normalized_p4_example():
    got = normalized_op([0.8, 0.6], 4)
    want = np.array([0.8 * (0.64 + 0.72), 0.6 * (1.28 + 0.36)])
    assert np.allclose(got, want / np.linalg.norm(want), rtol=1e-12)


@pytest.mark.parametrize("p", [1.0, 1.3, 3.0])
@pytest.mark.parametrize("ab", [(0.9, 0.3), (0.6, 0.55), (0.5, 0.8)])
def test_against_nested_mpmath(p, ab):
    a, b = ab
    assert ij_integral([a, b], p, 0) == pytest.approx(mp_i1_two(a, b, p), rel=1e-8)


def test_norm_power_matches_even_route():
    c = [0.3, 0.5, 0.2, 0.6]
    for n in (1, 2, 3):
        val, err = linear_norm_power(c, 2 * n)
        assert val == pytest.approx(float(linear_norm_power_even(c, n)), rel=1e-11)


def test_errors():
    with pytest.raises(ValueError):
        ij_integral([1, 1], 0.5, 0)
    with pytest.raises(ValueError):
        project_linear([0, 0], 3)
    with pytest.raises(EnumerationCapExceeded):
        project_linear_even([1] * 8, 9)


# invariants


def rational_vectors(max_d=4):
    q = st.fractions(min_value=Fraction(-2), max_value=Fraction(2), max_denominator=7)
    return st.lists(q, min_size=1, max_size=max_d).filter(lambda v: any(v))


@given(rational_vectors(), st.integers(0, 3))
def test_even_route_matches_polyalg(c, n):
    got = project_linear_even(c, n)
    img = nonlinear_image_even(LaurentPoly.linear(c), n)
    d = len(c)
    for j in range(d):
        assert got[j] == img.coefficient(tuple(int(k == j) for k in range(d)))
    num = project_linear([float(x) for x in c], 2 * n + 2)
    assert np.allclose(num, [complex(x) for x in got], rtol=1e-8, atol=1e-12)


@given(st.lists(st.floats(0.05, 1.0), min_size=2, max_size=3),
       st.lists(st.floats(0, 2 * math.pi), min_size=3, max_size=3),
       st.sampled_from([1.0, 1.5, 3.0, 4.5]))
def test_modulus_only_dependence(mods, phases, p):
    c = np.array(mods)
    rotated = c * np.exp(1j * np.array(phases[: len(mods)]))
    assert np.allclose(ij_integrals(c, p).values, ij_integrals(rotated, p).values, rtol=1e-12)
    out = project_linear(rotated, p)
    nz = np.abs(out) > 0
    assert np.allclose(np.angle(out[nz]), np.angle(rotated[nz]), atol=1e-12)


def ordered_pair():
    return st.tuples(st.floats(0.05, 1.0), st.floats(0.05, 1.0)).filter(
        lambda ab: ab[0] > ab[1] + 1e-3)


@given(ordered_pair(), st.floats(0.0, 1.0), st.floats(2.05, 8.0))
def test_larger_coordinate_has_smaller_integral_above_two(ab, c, p):
    a, b = ab
    ij = ij_integrals([a, b, c * b], p)
    margin = ij.values[1] - ij.values[0]
    assert margin > ij.error_estimates[0] + ij.error_estimates[1]


@given(ordered_pair(), st.floats(0.0, 1.0), st.floats(1.0, 8.0))
def test_output_order_preserved(ab, c, p):
    a, b = ab
    ij = ij_integrals([a, b, c * b], p)
    margin = a * ij.values[0] - b * ij.values[1]
    assert margin > a * ij.error_estimates[0] + b * ij.error_estimates[1]


@given(ordered_pair(), st.floats(1.0, 1.95))
def test_two_variables_below_two(ab, p):
    a, b = ab
    ij = ij_integrals([a, b], p)
    margin = ij.values[0] - ij.values[1]
    assert margin > ij.error_estimates[0] + ij.error_estimates[1]


@given(st.integers(1, 4), st.floats(1.0, 6.0))
def test_lambda_consistency(d, p):
    c = np.ones(d) / math.sqrt(d)
    out = project_linear(c, p)
    lam = linear_norm_power(c, p)[0]
    assert np.allclose(out, lam * c, rtol=1e-6)


@given(st.lists(st.floats(0.1, 1.0), min_size=3, max_size=3), st.sampled_from([1.0, 3.0]))
def test_zero_coordinates_stay_zero(mods, p):
    c = np.array(mods + [0.0])
    out = project_linear(c, p)
    assert out[-1] == 0
