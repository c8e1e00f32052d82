import json

import pytest

from qfiso.isolation import load_table1
from qfiso.theorems import HARNESSES, Grid, TheoremReport, check_cor_quat_and_4square, replay

SMALL = Grid(d_max=60, n_max=40, p_max=23, witness_p_max=60)


@pytest.mark.parametrize("sid", sorted(HARNESSES))
def test_harness_small_grid(sid):
    rep = HARNESSES[sid](SMALL)
    assert rep.cases > 0
    assert rep.passed, rep.failures[:3]


@pytest.mark.parametrize("sid", ["prop-iso-unary", "lem-order4-genera"])
def test_reports_are_deterministic(sid):
    a = HARNESSES[sid](SMALL).to_json()
    b = HARNESSES[sid](SMALL).to_json()
    assert a == b
    again = TheoremReport.from_json(json.loads(json.dumps(a)))
    assert again.to_json() == a


def test_corollary_audit_on_table():
    rep = check_cor_quat_and_4square(load_table1())
    assert rep.passed


def test_replay_rejects_non_violation():
    # 1 is represented by the principal class, so there is nothing to reproduce
    assert not replay({"kind": "prop-iso-unary", "D": -23, "C": [1, 1, 6], "p": 5, "n": 1})
    assert not replay({"kind": "genera-count", "D": -84})


def test_replay_shows_hypothesis_is_needed():
    # p = 2 splits for D = -23 but no ambiguous class represents it: 2 is missed, 8 = 1 + 1 + 6 is hit
    assert replay({"kind": "prop-iso-unary", "D": -23, "C": [1, 1, 6], "p": 2, "n": 2})


def test_replay_out_of_scope_np2_case():
    # gcd(n, D) > 1: 8 = 2^2 + 4 under x^2 + 4y^2 although no class of D = -16 represents 2
    assert replay({"kind": "thm-np2-classify-1", "D": -16, "C": [1, 0, 4], "n": 2, "primes": [2]})


def test_replay_unknown_kind():
    with pytest.raises(ValueError):
        replay({"kind": "nope"})
