"""Run every statement harness on a chosen grid and print the reports."""

import argparse
import json

from qfiso.theorems import Grid, run_all


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d-max", type=int, default=200)
    ap.add_argument("--n-max", type=int, default=100)
    ap.add_argument("--p-max", type=int, default=50)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    reports = run_all(Grid(d_max=args.d_max, n_max=args.n_max, p_max=args.p_max))
    if args.json:
        print(json.dumps([r.to_json(timing=True) for r in reports], indent=1))
    else:
        for r in reports:
            print(r.text(), f"({r.elapsed:.1f}s)")


if __name__ == "__main__":
    main()
