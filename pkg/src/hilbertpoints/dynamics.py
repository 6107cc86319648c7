"""Iterating the normalized projection on the unit sphere of linear polynomials."""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .projection import as_coeffs, normalized_op
from .quadrature import DEFAULT_SPEC, QuadratureError, QuadratureSpec

__all__ = [
    "StoppingRule",
    "IterationTrace",
    "ExperimentReport",
    "EQUAL_MODULUS",
    "SINGLE_COORDINATE",
    "FIXED_FROM_START",
    "UNRESOLVED",
    "TABLE1_START",
    "iterate",
    "classify_limit",
    "random_starts",
    "run_trials",
    "conjecture_experiment",
    "trace_to_json",
    "trace_to_csv",
]

EQUAL_MODULUS = "equal-modulus-limit"
SINGLE_COORDINATE = "single-coordinate-limit"
FIXED_FROM_START = "fixed-from-start"
UNRESOLVED = "unresolved"

# start vector of the published p = 1 trajectory in three variables
TABLE1_START = (0.7256, 0.6766, 0.1251)


@dataclass(frozen=True)
class StoppingRule:
    max_iters: int = 500
    fixed_point_tol: float = 1e-10
    stall_window: int = 50

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.fixed_point_tol > 0:
            raise ValueError("fixed_point_tol must be positive")
        if self.stall_window < 1:
            raise ValueError("stall_window must be >= 1")


@dataclass
class IterationTrace:
    p: float
    start: np.ndarray
    iterates: list[np.ndarray]
    residuals: list[float]
    rule: StoppingRule
    converged: bool = False
    classification: str = UNRESOLVED
    note: str = ""

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]

    def moduli(self) -> np.ndarray:
        return np.abs(np.array(self.iterates))


def iterate(c0, p: float, rule: StoppingRule = StoppingRule(),
            spec: QuadratureSpec = DEFAULT_SPEC) -> IterationTrace:
    """Apply the normalized projection until successive iterates are within
    ``rule.fixed_point_tol`` in H^2 distance, or the budget runs out.

    The start is normalized if needed.  A run stops early as stalled when the
    last ``rule.stall_window`` residuals are flat to within 0.1%, which is what
    a cycle or a plateau looks like.  Growing residuals are not a stall: starts
    close to a face of the sphere move slowly at first.
    """
    if not p >= 1:
        raise ValueError("p must be >= 1")
    c = as_coeffs(c0)
    norm = np.linalg.norm(c)
    if norm == 0:
        raise ValueError("start vector must be nontrivial")
    c = c / norm
    trace = IterationTrace(float(p), c.copy(), [c], [], rule)
    for _ in range(rule.max_iters):
        try:
            nxt = normalized_op(trace.final, p, spec)
        except (QuadratureError, ValueError, FloatingPointError) as exc:
            trace.note = f"stopped after {len(trace.residuals)} steps: {exc}"
            break
        if not np.all(np.isfinite(nxt)):
            trace.note = f"non-finite iterate after {len(trace.residuals)} steps"
            break
        res = float(np.linalg.norm(nxt - trace.final))
        trace.iterates.append(nxt)
        trace.residuals.append(res)
        if res < rule.fixed_point_tol:
            trace.converged = True
            break
        window = trace.residuals[-rule.stall_window:]
        if len(window) == rule.stall_window and max(window) <= (1 + 1e-3) * min(window):
            trace.note = "stalled"
            break
    trace.classification = classify_limit(trace)
    return trace


def classify_limit(trace: IterationTrace) -> str:
    tol = trace.rule.fixed_point_tol
    if trace.residuals and trace.residuals[0] < tol:
        return FIXED_FROM_START
    if not trace.converged:
        return UNRESOLVED
    mods = np.abs(trace.final)
    nz = mods[np.abs(trace.start) > 0]
    if nz.size > 1 and float(nz.max() - nz.min()) <= 10 * tol:
        return EQUAL_MODULUS
    if int(np.sum(mods > 1 - 10 * tol)) == 1:
        return SINGLE_COORDINATE
    return UNRESOLVED


def random_starts(d: int, trials: int, seed: int, phases: bool = False) -> list[np.ndarray]:
    """Seeded starts drawn uniformly from the positive orthant of the unit sphere."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(trials):
        v = np.abs(rng.standard_normal(d))
        v = v / np.linalg.norm(v)
        if phases:
            v = v * np.exp(2j * np.pi * rng.random(d))
        out.append(np.asarray(v, dtype=complex))
    return out


def run_trials(d: int, p: float, trials: int, seed: int, rule: StoppingRule = StoppingRule(),
               spec: QuadratureSpec = DEFAULT_SPEC, phases: bool = False) -> list[IterationTrace]:
    return [iterate(c, p, rule, spec) for c in random_starts(d, trials, seed, phases)]


@dataclass
class ExperimentReport:
    d: int
    p: float
    trials: int
    seed: int
    single_at_largest: int = 0
    classifications: dict = field(default_factory=dict)
    monotonicity_violations: int = 0
    status: str = "evidence only; the limit question remains open"

    @property
    def fraction_single_at_largest(self) -> float:
        return self.single_at_largest / self.trials if self.trials else math.nan

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "p": self.p,
            "trials": self.trials,
            "seed": self.seed,
            "single_at_largest": self.single_at_largest,
            "fraction_single_at_largest": self.fraction_single_at_largest,
            "classifications": dict(sorted(self.classifications.items())),
            "monotonicity_violations": self.monotonicity_violations,
            "status": self.status,
        }


def conjecture_experiment(d: int, p: float, trials: int, seed: int,
                          spec: QuadratureSpec = DEFAULT_SPEC,
                          rule: StoppingRule = StoppingRule(),
                          phases: bool = False) -> ExperimentReport:
    """For 1 <= p < 2, count random starts whose limit is the largest coordinate.

    Also counts traces along which the largest modulus ever decreases.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if not 1 <= p < 2:
        raise ValueError("the experiment targets 1 <= p < 2")
    report = ExperimentReport(d, float(p), trials, seed)
    counts: Counter = Counter()
    for start in random_starts(d, trials, seed, phases):
        mods = np.abs(start)
        top = int(np.argmax(mods))
        if np.sum(mods == mods[top]) > 1:
            continue  # ties have probability zero; skip rather than bias
        trace = iterate(start, p, rule, spec)
        counts[trace.classification] += 1
        if trace.classification == SINGLE_COORDINATE and int(np.argmax(np.abs(trace.final))) == top:
            report.single_at_largest += 1
        largest = trace.moduli()[:, top]
        if np.any(np.diff(largest) < -1e-12):
            report.monotonicity_violations += 1
    report.classifications = dict(counts)
    return report


def trace_to_json(trace: IterationTrace) -> dict:
    def pairs(v):
        return [[float(x.real), float(x.imag)] for x in v]

    return {
        "p": trace.p,
        "start": pairs(trace.start),
        "iterates": [pairs(v) for v in trace.iterates],
        "residuals": [float(r) for r in trace.residuals],
        "converged": trace.converged,
        "classification": trace.classification,
        "note": trace.note,
    }


def trace_to_csv(trace: IterationTrace) -> str:
    """Rows ``n, |c_1|, .., |c_d|``, one per iterate including the start."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    d = len(trace.start)
    w.writerow(["n"] + [f"abs_c{j + 1}" for j in range(d)])
    for n, v in enumerate(trace.iterates):
        w.writerow([n] + [repr(float(x)) for x in np.abs(v)])
    return buf.getvalue()
