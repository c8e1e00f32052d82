import json

import pytest

from qfiso.arith import primes_up_to
from qfiso.isolation import (
    CandidateRecord,
    VerificationResult,
    base_invariants,
    load_table1,
    passes_odd_order_filter,
    saturation_audit,
    search_candidates,
    table1_document,
    verify_candidate,
    verify_many,
    write_table1,
)
from qfiso.lattice import Lattice, canonical_gram, represents_lattice

RECORDS = load_table1()


def test_table_shape():
    assert len(RECORDS) == 19
    assert [sum(r.row == k for r in RECORDS) for k in (1, 2, 3, 4)] == [10, 4, 1, 4]
    for r in RECORDS:
        assert r.candidate.disc == r.stated_disc
        assert r.candidate.rank == 4 and r.base.rank == 2


def test_dataset_round_trip(tmp_path):
    path = write_table1(tmp_path / "t.json")
    again = load_table1(path)
    assert again == RECORDS
    doc = json.loads(path.read_text())
    assert doc["schema_version"] == 1
    assert doc == table1_document()


def test_record_rejects_unknown_keys():
    d = RECORDS[0].to_json()
    d["surprise"] = 1
    with pytest.raises(ValueError):
        CandidateRecord.from_json(d)


def test_record_rejects_wrong_determinant():
    d = RECORDS[0].to_json()
    d["stated_disc"] += 1
    with pytest.raises(ValueError):
        CandidateRecord.from_json(d)


@pytest.mark.parametrize("rec", RECORDS, ids=lambda r: r.id)
def test_candidates_miss_their_base(rec):
    assert represents_lattice(rec.candidate, rec.base) is None


def test_verify_small_and_witnesses_check():
    rec = RECORDS[0]
    res = verify_candidate(rec, 13)
    assert res.verified
    assert sorted(res.per_prime) == primes_up_to(13)
    for p, status in res.per_prime.items():
        assert len(status.witnesses) == p + 1
    again = VerificationResult.from_json(json.loads(json.dumps(res.to_json())))
    assert again == res


def test_verification_is_monotone_in_p_max():
    rec = RECORDS[10]
    small, large = verify_candidate(rec, 7), verify_candidate(rec, 19)
    for p, st in small.per_prime.items():
        assert large.per_prime[p] == st


def test_row3_half_integral_reading_fails():
    rec = next(r for r in RECORDS if r.row == 3)
    assert rec.alt_base is not None
    assert not verify_candidate(rec, 7, base=rec.alt_base).verified


def test_non_candidate_fails():
    # I4 represents <2,2>, so it is not a candidate for that base
    rec = CandidateRecord("x", 0, Lattice("2,0;0,2"), Lattice.diag(1, 1, 1, 1), 1)
    res = verify_candidate(rec, 5)
    assert not res.non_representation_of_base and not res.verified


def test_verify_many_threads_agree():
    recs = RECORDS[:3]
    serial = verify_many(recs, 11, threads=1)
    parallel = verify_many(recs, 11, threads=2)
    assert [r.to_json() for r in serial] == [r.to_json() for r in parallel]


def test_odd_order_filter_keeps_table():
    for r in RECORDS:
        _, D = base_invariants(r.base)
        assert passes_odd_order_filter(r.stated_disc, D), r.id


def test_odd_order_filter_is_sound_on_small_search():
    base = Lattice("2,1;1,2")
    with_filter = search_candidates(base, 20, 13)
    without = search_candidates(base, 20, 13, odd_order_filter=False)
    assert [canonical_gram(r.candidate) for r in with_filter] == [canonical_gram(r.candidate) for r in without]


def test_search_below_smallest_candidate_is_empty():
    assert search_candidates(Lattice("2,1;1,2"), 10, 13) == []


def test_saturation_audit_row1():
    rec = RECORDS[0]
    for p in primes_up_to(47):
        a = saturation_audit(rec, p)
        assert a.status in ("pass", "skipped"), (p, a)
        if a.status == "pass":
            assert len(a.entries) == 2
            assert all(e.t % p for e in a.entries)
