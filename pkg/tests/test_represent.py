from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfiso.arith import kronecker, primes_up_to, squarefree_part
from qfiso.binform import Form, class_group, form_class
from qfiso.represent import (
    classify_np2_primes,
    no_class_represents_iff,
    all_solutions_count,
    primitive_count,
    psi,
    represents,
    represents_form,
    solutions,
    total_rep_count,
)


def box_solutions(f: Form, n: int):
    r = 2 * n + 2
    return sorted(
        ((x, y) for x in range(-r, r + 1) for y in range(-r, r + 1) if f(x, y) == n),
        key=lambda t: (t[1], t[0]),
    )


@given(st.integers(1, 12), st.integers(-11, 11), st.integers(1, 12), st.integers(1, 40))
def test_solutions_match_box(a, b, c, n):
    if b * b - 4 * a * c >= 0:
        return
    f = Form(a, b, c)
    got = [(s.x, s.y) for s in solutions(f, n)]
    assert got == box_solutions(f, n)
    assert represents_form(a, b, c, n) == bool(got)
    assert all(s.primitive == (gcd(s.x, s.y) == 1) for s in solutions(f, n))


def test_known_representations():
    assert represents(form_class(Form(1, 0, 1)), 25)
    assert not represents(form_class(Form(1, 0, 1)), 21)
    assert [(s.x, s.y) for s in solutions(Form(1, 0, 1), 5)] == [
        (-1, -2), (1, -2), (-2, -1), (2, -1), (-2, 1), (2, 1), (-1, 2), (1, 2)
    ]


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -15, -20, -23, -39, -56])
def test_psi_matches_brute_force(D):
    for n in range(1, 121):
        if gcd(n, D) == 1:
            assert psi(n, D) == primitive_count(n, D), n


@pytest.mark.parametrize("D", [-3, -4, -23, -56])
def test_total_count_formula(D):
    for n in range(1, 121):
        if gcd(n, D) == 1:
            assert total_rep_count(n, D) == all_solutions_count(n, D), n
            if all(n % (q * q) for q in range(2, 12)):
                assert total_rep_count(n, D) == psi(n, D)


def test_psi_examples():
    assert psi(5, -4) == 8
    assert psi(9, -4) == 0  # x^2 + y^2 = 9 has only imprimitive solutions
    assert total_rep_count(9, -4) == 4
    for D in (-3, -4, -23):
        assert psi(1, D) == {-3: 6, -4: 4}.get(D, 2)


def test_psi_rejects_non_coprime():
    with pytest.raises(ValueError):
        psi(6, -23 * 3)
    with pytest.raises(ValueError):
        psi(0, -23)


@pytest.mark.parametrize("D", [-23, -39, -47, -56, -84])
def test_no_class_represents_iff(D):
    G = class_group(D)
    for n in range(1, 200):
        if gcd(n, D) != 1:
            continue
        flag, p = no_class_represents_iff(n, D)
        assert flag == (not any(represents(C, n) for C in G.elements))
        if flag:
            assert squarefree_part(n) % p == 0 and kronecker(D, p) == -1


def test_classify_np2_primes_rejects_represented():
    G = class_group(-23)
    with pytest.raises(ValueError):
        classify_np2_primes(1, G.identity, G, 50)


@pytest.mark.parametrize("D", [-23, -39, -56])
def test_classify_np2_prediction_matches_search(D):
    G = class_group(D)
    for C in G.elements:
        for n in range(1, 40):
            if gcd(n, D) == 1 and not represents(C, n):
                r = classify_np2_primes(n, C, G, 50)
                assert r.agree, (C, n)
                if r.case == 1:
                    assert r.observed == []


def test_odd_primes_bound():
    assert primes_up_to(50)[-1] == 47
