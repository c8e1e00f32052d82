"""Extended Table 1 verification; writes per-candidate results with witnesses to JSON."""

import argparse
import json
import os
import time
from pathlib import Path

from qfiso.isolation import SCHEMA_VERSION, load_table1, verify_many


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-max", type=int, default=149)
    ap.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--out", type=Path, default=Path("table1_results.json"))
    args = ap.parse_args()

    t0 = time.perf_counter()
    results = verify_many(load_table1(), args.p_max, threads=args.threads)
    for r in results:
        print(f"{r.candidate_id:6} verified={r.verified}  failing={r.failing_primes}")
    doc = {"schema_version": SCHEMA_VERSION, "p_max": args.p_max, "results": [r.to_json() for r in results]}
    args.out.write_text(json.dumps(doc) + "\n")
    print(f"{sum(r.verified for r in results)}/{len(results)} verified in {time.perf_counter() - t0:.1f}s -> {args.out}")


if __name__ == "__main__":
    main()
