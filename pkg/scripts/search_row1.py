"""Search quaternary candidates for a binary base and compare them with Table 1 up to isometry."""

import argparse
import time

from qfiso.isolation import load_table1, search_candidates
from qfiso.lattice import Lattice, canonical_gram


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--base", default="2,1;1,2")
    ap.add_argument("--disc-bound", type=int, default=16)
    ap.add_argument("--p-max", type=int, default=13)
    args = ap.parse_args()

    base = Lattice(args.base)
    t0 = time.perf_counter()
    found = search_candidates(base, args.disc_bound, args.p_max)
    known = {canonical_gram(r.candidate): r.id for r in load_table1() if canonical_gram(r.base) == canonical_gram(base)}
    for r in found:
        tag = known.get(canonical_gram(r.candidate), "new")
        print(f"disc {r.stated_disc:4}  {r.candidate}  ({tag})")
    print(f"{len(found)} candidates in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
