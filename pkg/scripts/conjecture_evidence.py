#!/usr/bin/env python3
"""Random-start runs of the normalized projection for 1 <= p < 2.

Counts how often the iteration ends at the coordinate that was largest at the
start.  The output is evidence, not a proof.
"""

import argparse
import json

from hilbertpoints.dynamics import conjecture_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--p", type=float, nargs="+", default=[1.0, 1.25, 1.5, 1.75])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    for d in args.d:
        for p in args.p:
            rep = conjecture_experiment(d, p, args.trials, args.seed)
            print(json.dumps(rep.to_dict(), sort_keys=True))


if __name__ == "__main__":
    main()
