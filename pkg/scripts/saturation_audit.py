"""Saturation audit of every Table 1 candidate over split primes up to --p-max."""

import argparse
from collections import Counter

from qfiso.arith import primes_up_to
from qfiso.isolation import load_table1, saturation_audit


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-max", type=int, default=47)
    args = ap.parse_args()

    for rec in load_table1():
        audits = [saturation_audit(rec, p) for p in primes_up_to(args.p_max)]
        counts = Counter(a.status for a in audits)
        fails = [a.p for a in audits if a.status == "fail"]
        print(f"{rec.id:6} {dict(counts)}" + (f"  failing primes {fails}" if fails else ""))


if __name__ == "__main__":
    main()
