import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hilbertpoints.fourier_tables import (
    CoeffTable,
    c2_closed,
    c2_quadrature,
    c2_recursion_check,
    c3_even,
    c3_quadrature,
    c3_recurse,
    c3_recursion_defect,
    c3_table,
    circle_coefficient,
    pyramid_slice,
)


def test_c2_examples():
    assert c2_closed(4, 1) == pytest.approx(3, rel=1e-15)
    assert c2_closed(4, 2) == pytest.approx(1, rel=1e-15)
    assert c2_closed(3, 1) == pytest.approx(16 / (3 * math.pi), rel=1e-14)
    assert c2_closed(4, 3) == 0
    assert c2_closed(2, 1) == pytest.approx(1) and c2_closed(2, 2) == 0


def test_c2_recursion_examples():
    assert c2_recursion_check(2, range(-3, 5)) < 1e-12
    assert c2_recursion_check(2.5, range(-3, 5)) < 1e-10
    assert 2 * c2_closed(2, 1) + c2_closed(2, 0) + c2_closed(2, 2) == pytest.approx(c2_closed(4, 1))


@pytest.mark.parametrize("n", range(1, 7))
def test_c2_even_is_binomial_row(n):
    for a1 in range(-n, n + 2):
        want = math.comb(2 * n - 1, n - a1) if 0 <= n - a1 <= 2 * n - 1 else 0
        assert c2_closed(2 * n, a1) == pytest.approx(want, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0, 4.5, 7.2])
@pytest.mark.parametrize("a1", [-2, 0, 1, 2, 5])
def test_c2_closed_matches_quadrature(p, a1):
    val, err = c2_quadrature(p, a1)
    assert c2_closed(p, a1) == pytest.approx(val, abs=max(err, 1e-13) * 10)


@pytest.mark.parametrize("p", [1.5, 3.0, 5.5])
def test_c2_decay(p):
    vals = [abs(c2_closed(p, a)) for a in range(math.ceil(p) + 1, 40)]
    assert all(y < x for x, y in zip(vals, vals[1:]))
    assert vals[-1] < 1e-3


def test_c2_large_arguments():
    assert math.isfinite(c2_closed(400.5, 3))
    assert c2_closed(400.5, 3) > 0


def test_c3_even_examples():
    t1 = c3_even(1)
    assert t1.entries == {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1}
    t2 = c3_even(2)
    assert t2[(1, 0, 0)] == 5 and t2[(1, 1, -1)] == 2 and t2[(2, -1, 0)] == 1
    assert c3_recursion_defect(t1, t2) == 0
    assert sum(t2.entries.values()) == 3 ** 2 * 3 ** 1  # psi^2 conj(psi)^1 at zeta = 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_c3_recursion_exact(n):
    assert c3_recurse(c3_even(n)).entries == c3_even(n + 1).entries


@pytest.mark.parametrize("n", [2, 3, 4])
def test_c3_permutation_symmetry(n):
    t = c3_even(n)
    for a, v in t.entries.items():
        for perm in itertools.permutations(a):
            assert t[perm] == v


def test_pyramid_numbering():
    assert pyramid_slice(3).entries == c3_even(2).entries
    with pytest.raises(ValueError):
        pyramid_slice(2)


def test_c3_cap_and_validation():
    with pytest.raises(ValueError):
        c3_even(30)
    with pytest.raises(ValueError):
        CoeffTable(3, 2.0, {(1, 1, 1): 1})
    with pytest.raises(ValueError):
        c3_quadrature(3, (1, 1, 1))


def test_c3_quadrature_examples():
    assert c3_quadrature(4, (1, 0, 0))[0] == pytest.approx(5, abs=1e-6)
    assert abs(c3_quadrature(2, (-1, -1, 3))[0]) < 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_c3_quadrature_matches_exact(n):
    exact = c3_even(n)
    for a in [(1, 0, 0), (2, -1, 0), (1, 1, -1), (-1, -1, 3), (3, -1, -1)]:
        re, im, err = c3_quadrature(2 * n, a)
        assert re == pytest.approx(exact[a], abs=1e-9)
        assert abs(im) < 1e-9


def test_quadrature_table_recursion_and_symmetry():
    lo = c3_table(2.7, radius=3)
    hi = c3_table(4.7, radius=2)
    pred = c3_recurse(lo)
    assert max(abs(hi[a] - pred[a]) for a in hi.entries) < 1e-8
    for a, v in hi.entries.items():
        assert hi[(a[1], a[0], a[2])] == pytest.approx(v, abs=1e-12)
        assert hi[(a[2], a[1], a[0])] == pytest.approx(v, abs=1e-12)


@given(st.floats(0.0, 2.5), st.integers(-3, 4), st.floats(1.0, 6.0))
def test_circle_coefficient_against_fft(R, m, p):
    n = 4096
    w = np.exp(2j * math.pi * (np.arange(n) + 0.5) / n)
    v = abs(R + w) ** (p - 2) * (R + w) * w ** (-m)
    if abs(R - 1) < 0.02 and p < 2:
        return
    assert circle_coefficient(R, m, p) == pytest.approx(complex(v.mean()).real, abs=1e-6)
