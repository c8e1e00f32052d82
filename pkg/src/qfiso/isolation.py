"""Isolation candidates: the bundled Table 1 dataset, verification, and search."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from pathlib import Path

from .arith import factor, kronecker, primes_up_to
from .binform import Form, class_group, reduce
from .lattice import (
    Embedding,
    Lattice,
    binary_form_of,
    canonical_gram,
    index_p_sublattices,
    lattice_of_form,
    norm_ideal,
    norm_p_sublattices,
    represents_lattice,
    saturate,
)
from .represent import represents

SCHEMA_VERSION = 1

__all__ = [
    "CandidateRecord",
    "VerificationResult",
    "PrimeStatus",
    "BudgetExceeded",
    "TABLE1",
    "load_table1",
    "write_table1",
    "verify_candidate",
    "verify_many",
    "search_candidates",
    "saturation_audit",
    "base_invariants",
    "odd_order_primes",
    "passes_odd_order_filter",
]


# Literal copy of the candidate table; the bundled JSON is regenerated from this.
_R1 = [[2, 1], [1, 2]]
_R2 = [[2, 0], [0, 2]]
_R3 = [[2, 1], [1, 3]]
_R4 = [[6, 3], [3, 8]]
TABLE1 = [
    (1, _R1, "{E}", [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 4, 2], [0, 0, 2, 5]], 16),
    (1, _R1, "{E}", [[1, 0, 0, 0], [0, 2, 0, 1], [0, 0, 2, 1], [0, 1, 1, 5]], 16),
    (1, _R1, "{E}", [[1, 0, 0, 0], [0, 2, 1, -1], [0, 1, 5, 1], [0, -1, 1, 5]], 36),
    (1, _R1, "{E}", [[2, 0, 1, 1], [0, 3, 0, 0], [1, 0, 3, 0], [1, 0, 0, 3]], 36),
    (1, _R1, "{E}", [[2, 0, 0, 1], [0, 2, 0, 1], [0, 0, 4, 2], [1, 1, 2, 6]], 64),
    (1, _R1, "{E}", [[2, 0, 1, 0], [0, 3, 1, 1], [1, 1, 5, 2], [0, 1, 2, 5]], 100),
    (1, _R1, "{E}", [[2, 1, 0, 1], [1, 3, 1, 1], [0, 1, 5, -2], [1, 1, -2, 6]], 100),
    (1, _R1, "{E}", [[2, 0, 1, 1], [0, 4, 2, -2], [1, 2, 6, 1], [1, -2, 1, 6]], 144),
    (1, _R1, "{E}", [[2, 0, 1, 1], [0, 6, 1, -1], [1, 1, 6, 3], [1, -1, 3, 6]], 256),
    (1, _R1, "{E}", [[2, 0, 1, 1], [0, 6, 3, -1], [1, 3, 6, 2], [1, -1, 2, 10]], 400),
    (2, _R2, "{E}", [[1, 0, 0, 0], [0, 2, 0, 1], [0, 0, 4, 0], [0, 1, 0, 5]], 36),
    (2, _R2, "{E}", [[1, 0, 0, 0], [0, 2, 0, 1], [0, 0, 4, 2], [0, 1, 2, 6]], 36),
    (2, _R2, "{E}", [[2, 1, 1, 1], [1, 4, 0, 1], [1, 0, 4, 0], [1, 1, 0, 4]], 81),
    (2, _R2, "{E}", [[2, 0, 0, 1], [0, 4, 0, 2], [0, 0, 4, 0], [1, 2, 0, 6]], 144),
    (3, _R3, "Z/3Z", [[1, 0, 0, 0], [0, 2, 0, 1], [0, 0, 6, 1], [0, 1, 1, 6]], 64),
    (4, _R4, "Z/4Z", [[1, 0, 0, 0], [0, 2, 1, 1], [0, 1, 3, 0], [0, 1, 0, 11]], 52),
    (4, _R4, "Z/4Z", [[2, 0, 1, 1], [0, 3, 1, 1], [1, 1, 4, 2], [1, 1, 2, 4]], 52),
    (4, _R4, "Z/4Z", [[2, 0, 1, 1], [0, 4, 2, -2], [1, 2, 4, 0], [1, -2, 0, 12]], 208),
    (4, _R4, "Z/4Z", [[6, 2, 3, 3], [2, 6, 0, 1], [3, 0, 10, 5], [3, 1, 5, 12]], 2401),
]

_ROW3_NOTE = (
    "printed group Z/3Z does not match the integral Gram (2 1;1 3), whose form "
    "2x^2+2xy+3y^2 has D=-20 and group Z/2Z; the half-integral reading "
    "2x^2+xy+3y^2 (D=-23) gives Z/3Z. Verification uses the integral Gram as printed."
)


@dataclass(frozen=True)
class CandidateRecord:
    id: str
    row: int
    base: Lattice
    candidate: Lattice
    stated_disc: int
    printed_group: str = ""
    note: str = ""
    alt_base: Lattice | None = None
    alt_reading: str = ""

    def __post_init__(self):
        if self.candidate.rank != 4 or self.base.rank != 2:
            raise ValueError(f"{self.id}: expected binary base and quaternary candidate")
        if self.candidate.disc != self.stated_disc:
            raise ValueError(
                f"{self.id}: det(candidate) = {self.candidate.disc} differs from stated {self.stated_disc}"
            )

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "row": self.row,
            "base_gram": self.base.to_json(),
            "candidate_gram": self.candidate.to_json(),
            "stated_disc": self.stated_disc,
            "printed_group": self.printed_group,
            "note": self.note,
        }
        if self.alt_base is not None:
            out["alt_base_gram"] = self.alt_base.to_json()
            out["alt_reading"] = self.alt_reading
        return out

    @classmethod
    def from_json(cls, d: dict) -> "CandidateRecord":
        known = {
            "id", "row", "base_gram", "candidate_gram", "stated_disc",
            "printed_group", "note", "alt_base_gram", "alt_reading",
        }
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown record keys: {sorted(unknown)}")
        return cls(
            id=d["id"],
            row=int(d["row"]),
            base=Lattice.from_json(d["base_gram"]),
            candidate=Lattice.from_json(d["candidate_gram"]),
            stated_disc=int(d["stated_disc"]),
            printed_group=d.get("printed_group", ""),
            note=d.get("note", ""),
            alt_base=Lattice.from_json(d["alt_base_gram"]) if "alt_base_gram" in d else None,
            alt_reading=d.get("alt_reading", ""),
        )


def _literal_records() -> list[CandidateRecord]:
    out = []
    per_row: dict[int, int] = {}
    for row, base, group, gram, disc in TABLE1:
        per_row[row] = per_row.get(row, 0) + 1
        kw = {}
        if row == 3:
            kw = dict(
                note=_ROW3_NOTE,
                alt_base=Lattice([[2, Fraction(1, 2)], [Fraction(1, 2), 3]]),
                alt_reading="half-integral",
            )
        out.append(
            CandidateRecord(
                id=f"r{row}c{per_row[row]}",
                row=row,
                base=Lattice(base),
                candidate=Lattice(gram),
                stated_disc=disc,
                printed_group=group,
                **kw,
            )
        )
    return out


def table1_document() -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "source": "Table 1: candidates for quaternary isolations of binary lattices",
        "records": [r.to_json() for r in _literal_records()],
    }


def write_table1(path: str | Path) -> Path:
    """Regenerate the dataset file from the embedded literal copy."""
    path = Path(path)
    path.write_text(json.dumps(table1_document(), indent=1) + "\n")
    return path


def load_table1(path: str | Path | None = None) -> list[CandidateRecord]:
    if path is None:
        text = resources.files("qfiso").joinpath("data/table1.json").read_text()
    else:
        text = Path(path).read_text()
    doc = json.loads(text)
    if isinstance(doc, list):
        records = doc
    else:
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {doc.get('schema_version')}")
        records = doc["records"]
    return [CandidateRecord.from_json(r) for r in records]


# ---------------------------------------------------------------- verification


@dataclass
class PrimeStatus:
    p: int
    all_represented: bool
    # one entry per index-p sublattice, in index_p_sublattices order: embedding matrix or None
    witnesses: list[list[list[int]] | None]
    distinct_classes: int

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "all_represented": self.all_represented,
            "distinct_classes": self.distinct_classes,
            "witnesses": self.witnesses,
        }

    @classmethod
    def from_json(cls, d: dict) -> "PrimeStatus":
        return cls(d["p"], d["all_represented"], d["witnesses"], d["distinct_classes"])


@dataclass
class VerificationResult:
    candidate_id: str
    non_representation_of_base: bool
    base_witness: list[list[int]] | None
    per_prime: dict[int, PrimeStatus]
    p_max: int
    elapsed: float = field(default=0.0, compare=False)

    @property
    def verified(self) -> bool:
        return self.non_representation_of_base and all(s.all_represented for s in self.per_prime.values())

    @property
    def failing_primes(self) -> list[int]:
        return [p for p, s in self.per_prime.items() if not s.all_represented]

    def to_json(self, witnesses: bool = True, timing: bool = False) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "candidate_id": self.candidate_id,
            "p_max": self.p_max,
            "verified": self.verified,
            "non_representation_of_base": self.non_representation_of_base,
            "base_witness": self.base_witness,
            "failing_primes": self.failing_primes,
        }
        if witnesses:
            out["per_prime"] = [s.to_json() for _, s in sorted(self.per_prime.items())]
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out

    @classmethod
    def from_json(cls, d: dict) -> "VerificationResult":
        """Inverse of to_json(witnesses=True)."""
        if "per_prime" not in d:
            raise ValueError("result JSON lacks per_prime; emit it with witnesses")
        per_prime = {s["p"]: PrimeStatus.from_json(s) for s in d["per_prime"]}
        return cls(
            d["candidate_id"],
            d["non_representation_of_base"],
            d["base_witness"],
            per_prime,
            d["p_max"],
            d.get("elapsed", 0.0),
        )


def _inv2(S):
    (a, b), (c, d) = S
    det = a * d - b * c
    assert det in (1, -1)
    return ((d * det, -b * det), (-c * det, a * det))


def _gl2_reduce_with_transform(f: Form):
    """(g, S): g reduced with b >= 0 and f.transform(S) == g, det S = +-1."""
    g, T = reduce(f)
    if g.b < 0:
        T = ((T[0][0], -T[0][1]), (T[1][0], -T[1][1]))
        g = Form(g.a, -g.b, g.c)
    return g, T


def verify_candidate(rec: CandidateRecord, p_max: int, base: Lattice | None = None) -> VerificationResult:
    """Check (a) the candidate misses the base lattice and (b) it represents every
    index-p sublattice of the base for every prime p <= p_max."""
    t0 = time.perf_counter()
    L = rec.candidate
    base = rec.base if base is None else base
    emb = represents_lattice(L, base)
    per_prime = {}
    cache: dict[Form, Embedding | None] = {}
    for p in primes_up_to(p_max):
        witnesses = []
        classes = set()
        for S, _ in index_p_sublattices(base, p):
            g, T = _gl2_reduce_with_transform(binary_form_of(S))
            classes.add(g)
            if g not in cache:
                cache[g] = represents_lattice(L, lattice_of_form(g))
            E = cache[g]
            if E is None:
                witnesses.append(None)
                continue
            # E embeds g; S = g in the basis T^-1, so E T^-1 embeds S
            Ti = _inv2(T)
            W = [[sum(E.T[i][k] * Ti[k][j] for k in range(2)) for j in range(2)] for i in range(L.rank)]
            assert Embedding(tuple(map(tuple, W))).check(L, S)
            witnesses.append(W)
        per_prime[p] = PrimeStatus(p, all(w is not None for w in witnesses), witnesses, len(classes))
    return VerificationResult(
        candidate_id=rec.id,
        non_representation_of_base=emb is None,
        base_witness=emb.to_json() if emb else None,
        per_prime=per_prime,
        p_max=p_max,
        elapsed=time.perf_counter() - t0,
    )


def _verify_job(args):
    rec, p_max = args
    return verify_candidate(rec, p_max)


def verify_many(records, p_max: int, threads: int = 1) -> list[VerificationResult]:
    """Verify records, optionally in worker processes; output order follows the input."""
    jobs = [(r, p_max) for r in records]
    if threads <= 1 or len(jobs) <= 1:
        return [_verify_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(_verify_job, jobs))


# ---------------------------------------------------------------- discriminant filters


def base_invariants(base: Lattice) -> tuple[int, int]:
    """(s, D): norm ideal generator and discriminant of the primitive scaled form."""
    s = norm_ideal(base)
    f = binary_form_of(base)
    return s, f.disc // (s * s)


def odd_order_primes(n: int) -> list[int]:
    return [p for p, e in factor(n).pairs if e % 2]


def passes_odd_order_filter(disc: int, D: int) -> bool:
    """Every prime dividing disc to an odd power divides D."""
    return all(D % q == 0 for q in odd_order_primes(disc))


# ---------------------------------------------------------------- search


class BudgetExceeded(RuntimeError):
    pass


def _int_det4(M) -> int:
    # Bareiss fraction-free elimination
    A = [row[:] for row in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if A[r][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _reduced_quaternary_grams(disc_bound: int, budget: int):
    """Integral Gram matrices satisfying the necessary Minkowski conditions
    a11 <= a22 <= a33 <= a44, |2 a_ij| <= a_ii, a11 a22 a33 a44 <= 4 det,
    positive definite with det <= disc_bound."""
    count = 0
    cap = 4 * disc_bound
    for a1 in range(1, cap + 1):
        for a2 in range(a1, cap // a1 + 1):
            for a3 in range(a2, cap // (a1 * a2) + 1):
                for a4 in range(a3, cap // (a1 * a2 * a3) + 1):
                    r1 = range(-(a1 // 2), a1 // 2 + 1)
                    r2 = range(-(a2 // 2), a2 // 2 + 1)
                    r3 = range(-(a3 // 2), a3 // 2 + 1)
                    for b12, b13, b14 in product(r1, r1, r1):
                        if a1 * a2 - b12 * b12 <= 0:
                            continue
                        for b23, b24 in product(r2, r2):
                            m3 = [[a1, b12, b13], [b12, a2, b23], [b13, b23, a3]]
                            d3 = _int_det4(m3)
                            if d3 <= 0:
                                continue
                            for b34 in r3:
                                count += 1
                                if count > budget:
                                    raise BudgetExceeded(
                                        f"more than {budget} Gram matrices for disc_bound={disc_bound}"
                                    )
                                M = [
                                    [a1, b12, b13, b14],
                                    [b12, a2, b23, b24],
                                    [b13, b23, a3, b34],
                                    [b14, b24, b34, a4],
                                ]
                                d = _int_det4(M)
                                if 0 < d <= disc_bound and a1 * a2 * a3 * a4 <= 4 * d:
                                    yield M, d


def search_candidates(
    base: Lattice,
    disc_bound: int,
    p_max: int,
    budget: int = 2_000_000,
    odd_order_filter: bool = True,
) -> list[CandidateRecord]:
    """Quaternary lattices with det <= disc_bound that miss ``base`` but represent
    all of its index-p sublattices for p <= p_max, one per isometry class."""
    s, D = base_invariants(base)
    primes = primes_up_to(p_max)
    subs_by_p = {}
    for p in primes:
        forms = []
        for S, _ in index_p_sublattices(base, p):
            g, _ = _gl2_reduce_with_transform(binary_form_of(S))
            if g not in forms:
                forms.append(g)
        subs_by_p[p] = [lattice_of_form(g) for g in forms]
    seen: dict[tuple, CandidateRecord] = {}
    for M, d in _reduced_quaternary_grams(disc_bound, budget):
        if odd_order_filter and not passes_odd_order_filter(d, D):
            continue
        L = Lattice(M)
        if represents_lattice(L, base) is not None:
            continue
        if not all(represents_lattice(L, S) is not None for p in primes for S in subs_by_p[p]):
            continue
        key = canonical_gram(L)
        if key not in seen:
            seen[key] = CandidateRecord(
                id=f"search-{len(seen) + 1}",
                row=0,
                base=base,
                candidate=Lattice(key),
                stated_disc=d,
                note=f"search p_max={p_max}",
            )
    out = sorted(seen.values(), key=lambda r: (r.stated_disc, canonical_gram(r.candidate)))
    return [
        CandidateRecord(f"search-{i + 1}", 0, r.base, r.candidate, r.stated_disc, note=r.note)
        for i, r in enumerate(out)
    ]


# ---------------------------------------------------------------- saturation audit


@dataclass
class AuditEntry:
    sublattice_index: int
    t: int
    primitive: bool
    ok: bool


@dataclass
class SaturationAudit:
    candidate_id: str
    p: int
    status: str  # "pass", "fail", "skipped"
    reason: str = ""
    entries: list[AuditEntry] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "candidate_id": self.candidate_id,
            "p": self.p,
            "status": self.status,
            "reason": self.reason,
            "entries": [e.__dict__ for e in self.entries],
        }


def saturation_audit(rec: CandidateRecord, p: int, result: VerificationResult | None = None) -> SaturationAudit:
    """For the norm-p index-p sublattices of the base, saturate their images in the
    candidate and check that p does not divide the saturation index."""
    s, D = base_invariants(rec.base)
    if kronecker(D, p) != 1:
        return SaturationAudit(rec.id, p, "skipped", f"p={p} is not split for D={D}")
    G = class_group(D)
    amb = [C for C, flag in zip(G.elements, G.ambiguous_flags) if flag]
    if not any(represents(C, p) for C in amb):
        return SaturationAudit(rec.id, p, "skipped", f"p={p} is not represented by an ambiguous class")
    L = rec.candidate
    subs = index_p_sublattices(rec.base, p)
    wanted = norm_p_sublattices(rec.base, p)
    entries = []
    for S, T in wanted:
        idx = next(i for i, (_, T2) in enumerate(subs) if T2 == T)
        if result is not None and p in result.per_prime:
            W = result.per_prime[p].witnesses[idx]
        else:
            E = represents_lattice(L, S)
            W = None if E is None else E.to_json()
        if W is None:
            return SaturationAudit(rec.id, p, "fail", f"sublattice {idx} is not represented")
        _, t = saturate(L, W)
        entries.append(AuditEntry(idx, t, t == 1, t % p != 0))
    status = "pass" if all(e.ok for e in entries) else "fail"
    return SaturationAudit(rec.id, p, status, "", entries)
