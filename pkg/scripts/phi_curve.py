#!/usr/bin/env python3
"""Tabulate Phi(p) on [1, 8] with both methods where they overlap, and write a CSV."""

import argparse
import csv

from hilbertpoints.phi import phi_bergman, phi_curve, status_label


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--step", type=float, default=0.25)
    ap.add_argument("--out", default="phi_curve.csv")
    args = ap.parse_args()

    rows = []
    for s in phi_curve(1.0, 8.0, args.step):
        bergman = ""
        if s.p >= 4.5:
            bergman = repr(phi_bergman(s.p).value)
        rows.append([s.p, repr(s.value), repr(s.error_estimate), bergman, status_label(s.p)])
        print(f"{s.p:6.3f}  {s.value: .10f}  +/- {s.error_estimate:.1e}  {status_label(s.p)}")
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["p", "value", "error", "bergman", "status"])
        w.writerows(rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
