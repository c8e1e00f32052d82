"""Acceptance gate: one PASS/FAIL line per criterion, with pinned time limits.

Run alone with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
import time
from math import gcd

import pytest

from qfiso import binform, lattice, represent
from qfiso.arith import factor, is_square
from qfiso.binform import class_group, has_order_4_element
from qfiso.isolation import base_invariants, load_table1, search_candidates, verify_many
from qfiso.lattice import Lattice, canonical_gram, represents_lattice
from qfiso.represent import primitive_count, psi
from qfiso.theorems import Grid, run_all

# wall-clock limits in seconds
LIMITS = {
    "classgroup": 1.0,
    "psi": 30.0,
    "theorems": 300.0,
    "table1-47": 300.0,
    "corollary": 1.0,
    "diag225": 5.0,
    "search": 120.0,
}

TABLE1_SUBSCRIPTS = {
    1: [16, 16, 36, 36, 64, 100, 100, 144, 256, 400],
    2: [36, 36, 81, 144],
    3: [64],
    4: [52, 52, 208, 2401],
}

_lines: list[str] = []


@pytest.fixture(autouse=True)
def cold_caches():
    """Time each criterion from cold caches."""
    for fn in (binform.reduced_forms, binform.class_group, lattice._vectors_cached, represent.represents_form):
        fn.cache_clear()


def gate(label: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else "")
    _lines.append(line)
    print(line, flush=True)
    assert ok, line


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_1_class_groups():
    def go():
        return {D: class_group(D) for D in (-3, -4, -23, -39)}

    groups, dt = timed(go)
    ok = (
        groups[-3].h == 1
        and groups[-4].h == 1
        and (groups[-23].h, groups[-23].structure()) == (3, [3])
        and (groups[-39].h, groups[-39].structure()) == (4, [4])
    )
    detail = ", ".join(f"h({D})={G.h} {G.structure_str()}" for D, G in groups.items())
    gate("1 class groups of -3, -4, -23, -39", ok and dt < LIMITS["classgroup"], f"{detail}; {dt:.3f}s")


def test_2_psi_formula():
    discs = (-3, -4, -7, -8, -15, -20, -23, -39, -56)

    def go():
        bad, checked = [], 0
        for D in discs:
            for n in range(1, 301):
                if gcd(n, D) == 1:
                    checked += 1
                    if psi(n, D) != primitive_count(n, D):
                        bad.append((D, n))
        return bad, checked

    (bad, checked), dt = timed(go)
    gate("2 psi equals brute-force primitive count", not bad and dt < LIMITS["psi"], f"{checked} pairs, {len(bad)} mismatches; {dt:.1f}s")


def test_3_theorem_harnesses():
    reports, dt = timed(lambda: run_all(Grid()))
    summary = ", ".join(f"{r.statement}:{len(r.failures)}" for r in reports)
    ok = all(r.passed for r in reports) and dt < LIMITS["theorems"]
    gate("3 theorem harnesses, zero counterexamples (|D|<=200, n<=100, p<=50)", ok, f"{summary}; {dt:.1f}s")


def test_4a_table1_loads():
    recs = load_table1()
    by_row = {k: [r.stated_disc for r in recs if r.row == k] for k in TABLE1_SUBSCRIPTS}
    dets_ok = all(r.candidate.disc == r.stated_disc for r in recs)
    ok = len(recs) == 19 and by_row == TABLE1_SUBSCRIPTS and dets_ok
    gate("4a Table 1: 19 candidates, determinants match subscripts", ok, f"{len(recs)} loaded")


def test_4b_table1_misses_base():
    recs = load_table1()
    hits = [r.id for r in recs if represents_lattice(r.candidate, r.base) is not None]
    gate("4b each candidate fails to represent its base", not hits, f"represented: {hits}")


def test_4c_table1_p47():
    results, dt = timed(lambda: verify_many(load_table1(), 47))
    bad = [r.candidate_id for r in results if not r.verified]
    gate("4c Table 1 verified at p_max=47", not bad and dt < LIMITS["table1-47"], f"failing: {bad}; {dt:.1f}s")


@pytest.mark.slow
def test_4d_table1_p149():
    results, dt = timed(lambda: verify_many(load_table1(), 149))
    bad = [(r.candidate_id, r.failing_primes) for r in results if not r.verified]
    gate("4d Table 1 verified at p_max=149 (extended run)", not bad, f"failing: {bad}; {dt:.1f}s")


def test_5_corollary_audits():
    def go():
        recs = load_table1()
        square_rows = all(is_square(r.stated_disc) for r in recs if r.row in (1, 2, 3))
        row4 = [r for r in recs if r.row == 4]
        _, D4 = base_invariants(row4[0].base)
        odd = {}
        for r in row4:
            if r.stated_disc in (52, 208):
                odd[r.stated_disc] = [p for p, e in factor(r.stated_disc).pairs if e % 2 and p > 2]
        odd_ok = set(odd) == {52, 208} and all(v == [13] and D4 % 13 == 0 for v in odd.values())
        return square_rows, odd_ok, has_order_4_element(class_group(D4)), D4

    (square_rows, odd_ok, order4, D4), dt = timed(go)
    ok = square_rows and odd_ok and order4 and D4 == -39 and dt < LIMITS["corollary"]
    gate(
        "5 corollary audits (square discs rows 1-3; 13 | 39 for 52, 208; order-4 class)",
        ok,
        f"square={square_rows} odd13={odd_ok} order4={order4} D={D4}; {dt:.3f}s",
    )


def test_6_diag225_squares():
    def go():
        L = Lattice.diag(2, 2, 5)
        hit = [m for m in range(1, 31) if represents_lattice(L, Lattice(str(m * m))) is not None]
        return hit

    hit, dt = timed(go)
    ok = hit == list(range(2, 31)) and dt < LIMITS["diag225"]
    gate("6 diag(2,2,5) represents m^2 for 2<=m<=30, not 1", ok, f"missed: {sorted(set(range(1, 31)) - set(hit))}; {dt:.2f}s")


def test_7_search_recovers_row1():
    base = Lattice("2,1;1,2")
    found, dt = timed(lambda: search_candidates(base, 16, 13))
    got = {canonical_gram(r.candidate) for r in found}
    want = [canonical_gram(r.candidate) for r in load_table1() if r.row == 1 and r.stated_disc == 16]
    ok = len(want) == 2 and all(w in got for w in want) and dt < LIMITS["search"]
    gate("7 search(disc<=16, p<=13) contains both disc-16 row-1 candidates", ok, f"{len(found)} found; {dt:.1f}s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
