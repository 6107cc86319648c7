import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hilbertpoints.dynamics import (
    EQUAL_MODULUS,
    FIXED_FROM_START,
    SINGLE_COORDINATE,
    TABLE1_START,
    UNRESOLVED,
    IterationTrace,
    StoppingRule,
    classify_limit,
    conjecture_experiment,
    iterate,
    random_starts,
    trace_to_csv,
    trace_to_json,
)

TABLE1 = [
    (0.7256, 0.6766, 0.1251),
    (0.7577, 0.6347, 0.1520),
    (0.8258, 0.5414, 0.1576),
    (0.9190, 0.3763, 0.1175),
    (0.9741, 0.2153, 0.0687),
    (0.9930, 0.1121, 0.0360),
    (0.9982, 0.0566, 0.0182),
    (0.9996, 0.0284, 0.0091),
    (0.9999, 0.0142, 0.0046),
]


@pytest.fixture(scope="module")
def table1_trace():
    return iterate(TABLE1_START, 1.0, StoppingRule(max_iters=8, fixed_point_tol=1e-300))


def test_rule_validation():
    with pytest.raises(ValueError):
        StoppingRule(max_iters=0)
    with pytest.raises(ValueError):
        StoppingRule(fixed_point_tol=0)


def test_table1_rows(table1_trace):
    mods = table1_trace.moduli()
    assert mods.shape == (9, 3)
    assert np.max(np.abs(mods - np.array(TABLE1))) < 1e-4


def test_table1_ratio_not_monotone(table1_trace):
    mods = table1_trace.moduli()
    ratio = mods[:, 0] / mods[:, 2]
    steps = np.diff(ratio)
    assert steps[0] < 0 and np.any(steps > 0)


def test_table1_limit_is_largest_coordinate():
    trace = iterate(TABLE1_START, 1.0)
    assert trace.classification == SINGLE_COORDINATE
    assert np.argmax(np.abs(trace.final)) == 0


def test_fixed_from_start():
    assert iterate([1, 0, 0], 4).classification == FIXED_FROM_START
    assert iterate([0, 1], 1.5).classification == FIXED_FROM_START


def test_equal_modulus_limit_at_three():
    c0 = np.array([0.9, 0.3, 0.316])
    trace = iterate(c0, 3.0)
    assert trace.classification == EQUAL_MODULUS
    assert np.max(np.abs(np.abs(trace.final) - 1 / math.sqrt(3))) < 1e-6


def test_single_coordinate_limit_below_two():
    trace = iterate([0.8, 0.6], 1.5)
    assert trace.classification == SINGLE_COORDINATE
    assert abs(trace.final[0]) == pytest.approx(1, abs=1e-9)


def test_unresolved_when_budget_runs_out():
    trace = iterate([0.8, 0.6], 3.0, StoppingRule(max_iters=2))
    assert not trace.converged
    assert classify_limit(trace) == UNRESOLVED


def test_start_normalized_and_nontrivial():
    trace = iterate([3, 4], 4, StoppingRule(max_iters=1))
    assert np.linalg.norm(trace.start) == pytest.approx(1)
    with pytest.raises(ValueError):
        iterate([0, 0], 3)
    with pytest.raises(ValueError):
        iterate([1, 1], 0.5)


def test_experiment_reports():
    rep = conjecture_experiment(2, 1.5, 6, seed=3)
    assert rep.single_at_largest == 6
    assert rep.monotonicity_violations == 0
    assert "open" in rep.status
    empty = conjecture_experiment(3, 1.2, 0, seed=0)
    assert empty.trials == 0 and empty.classifications == {}
    assert math.isnan(empty.fraction_single_at_largest)
    with pytest.raises(ValueError):
        conjecture_experiment(2, 2.5, 1, 0)


def test_random_starts_reproducible():
    a = random_starts(4, 5, seed=11, phases=True)
    b = random_starts(4, 5, seed=11, phases=True)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert all(abs(np.linalg.norm(x) - 1) < 1e-14 for x in a)
    assert all(np.all(np.abs(x) > 0) for x in random_starts(3, 5, seed=2))


def test_serialization():
    trace = iterate([0.8, 0.6], 4, StoppingRule(max_iters=3))
    doc = json.loads(json.dumps(trace_to_json(trace)))
    assert len(doc["iterates"]) == 4 and doc["p"] == 4
    lines = trace_to_csv(trace).splitlines()
    assert lines[0] == "n,abs_c1,abs_c2" and len(lines) == 5


# invariants along traces

start_mods = st.lists(st.floats(0.05, 1.0), min_size=2, max_size=3)


def _short(c, p):
    return iterate(c, p, StoppingRule(max_iters=6))


@given(start_mods, st.sampled_from([1.0, 1.5, 3.0, 4.0]),
       st.lists(st.floats(0, 2 * math.pi), min_size=4, max_size=4))
def test_trace_invariants(mods, p, phases):
    c = np.array(mods + [0.0]) * np.exp(1j * np.array(phases[: len(mods) + 1]))
    trace = _short(c, p)
    start = trace.start
    order = np.argsort(-np.abs(start[:-1]))
    for v in trace.iterates:
        assert abs(np.linalg.norm(v) - 1) < 1e-12
        assert v[-1] == 0
        assert np.allclose(np.angle(v[:-1]), np.angle(start[:-1]), atol=1e-12)
        m = np.abs(v[:-1])[order]
        gaps = np.diff(np.abs(start[:-1])[order])
        strict = gaps < -1e-9
        assert np.all(np.diff(m)[strict] < 0)


@given(st.floats(0.1, 1.0), st.floats(0.1, 1.0), st.sampled_from([1.0, 3.0]))
def test_equal_coordinates_stay_equal(a, b, p):
    trace = _short([a, a, b], p)
    for v in trace.iterates:
        assert abs(abs(v[0]) - abs(v[1])) < 1e-10


@given(st.lists(st.floats(0.05, 1.0), min_size=3, max_size=3), st.sampled_from([3.0, 5.0]))
def test_largest_decreases_above_two(mods, p):
    trace = _short(mods, p)
    top = trace.moduli().max(axis=1)
    target = 1 / math.sqrt(3)
    for x, y in zip(top, top[1:]):
        if x - target > 1e-8:
            assert y < x
    m = trace.moduli()
    j = int(np.argmax(m[0]))
    ratios = m[:, j][:, None] / m
    assert np.all(np.diff(ratios, axis=0) <= 1e-12)


@given(st.floats(0.05, 1.0), st.floats(0.05, 1.0), st.floats(1.0, 1.95))
def test_largest_increases_in_two_variables(a, b, p):
    if abs(a - b) < 1e-3:
        return
    trace = _short([a, b], p)
    top = trace.moduli().max(axis=1)
    for x, y in zip(top, top[1:]):
        if 1 - x > 1e-10:
            assert y > x


def test_classify_unconverged_trace_directly():
    rule = StoppingRule()
    c = np.array([1.0, 0.0])
    trace = IterationTrace(3.0, c, [c, c], [0.5], rule)
    assert classify_limit(trace) == UNRESOLVED
