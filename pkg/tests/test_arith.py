from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfiso.arith import (
    factor,
    find_primes_with_conditions,
    is_prime,
    is_square,
    kronecker,
    ord_p,
    primes_up_to,
    squarefree_part,
)

odd_primes = [p for p in primes_up_to(200) if p > 2]


def legendre_brute(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if any(x * x % p == a for x in range(1, p)) else -1


@pytest.mark.parametrize("p", odd_primes[:25])
def test_kronecker_matches_legendre(p):
    for a in range(-2 * p, 2 * p):
        assert kronecker(a, p) == legendre_brute(a, p)


@given(st.integers(-500, 500), st.integers(-500, 500), st.integers(1, 500))
def test_kronecker_multiplicative_in_top(a, b, n):
    assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)


@given(st.integers(-500, 500), st.integers(-300, 300).filter(bool), st.integers(-300, 300).filter(bool))
def test_kronecker_multiplicative_in_bottom(a, m, n):
    assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


def test_kronecker_at_two():
    # (a|2) depends on a mod 8
    for a in range(-40, 40):
        expect = 0 if a % 2 == 0 else (1 if a % 8 in (1, 7) else -1)
        assert kronecker(a, 2) == expect


def test_kronecker_zero_zero_raises():
    with pytest.raises(ValueError):
        kronecker(0, 0)


@given(st.integers(-10**6, 10**6).filter(bool))
def test_factor_round_trip(n):
    f = factor(n)
    assert f.value() == n
    assert all(is_prime(p) for p in f.primes())


def test_factor_zero_raises():
    with pytest.raises(ValueError):
        factor(0)


@given(st.integers(1, 10**5), st.sampled_from([2, 3, 5, 7, 13]))
def test_ord_p(n, p):
    k = ord_p(n, p)
    assert n % p**k == 0 and n % p ** (k + 1) != 0


@given(st.integers(1, 10**5))
def test_squarefree_part(n):
    s = squarefree_part(n)
    assert n % s == 0 and is_square(n // s)
    assert all(e == 1 for _, e in factor(s).pairs)


def test_primes_up_to():
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(1) == []


def test_find_primes_with_conditions():
    ps = find_primes_with_conditions([(-4, 1), (-3, -1)], 200)
    assert ps == [p for p in primes_up_to(200) if kronecker(-4, p) == 1 and kronecker(-3, p) == -1]
    assert all(gcd(p, 12) == 1 for p in ps)
    with pytest.raises(ValueError):
        find_primes_with_conditions([(-4, 2)], 100)
    with pytest.raises(ValueError):
        find_primes_with_conditions([], 1)
