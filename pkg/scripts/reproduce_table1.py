#!/usr/bin/env python3
"""Print the p = 1 trajectory from the published start vector next to the published values."""

import numpy as np

from hilbertpoints.dynamics import TABLE1_START, StoppingRule, iterate

PUBLISHED = [
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


def main():
    trace = iterate(TABLE1_START, 1.0, StoppingRule(max_iters=8, fixed_point_tol=1e-300))
    worst = 0.0
    print(f"{'n':>2}  {'a':>8} {'b':>8} {'c':>8}   max|diff|")
    for n, (v, ref) in enumerate(zip(trace.iterates, PUBLISHED)):
        mods = np.abs(v)
        diff = float(np.max(np.abs(mods - ref)))
        worst = max(worst, diff)
        print(f"{n:>2}  {mods[0]:8.4f} {mods[1]:8.4f} {mods[2]:8.4f}   {diff:.1e}")
    print(f"largest deviation from the published 4-digit values: {worst:.1e}")


if __name__ == "__main__":
    main()
