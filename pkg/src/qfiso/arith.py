"""Exact elementary number theory: Kronecker symbol, factoring, prime search."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

__all__ = [
    "Factorization",
    "kronecker",
    "factor",
    "is_prime",
    "squarefree_part",
    "is_square",
    "primes_up_to",
    "find_primes_with_conditions",
    "ord_p",
]


@dataclass(frozen=True)
class Factorization:
    """n = sign * prod(p**e for p, e in pairs)."""

    pairs: tuple[tuple[int, int], ...]
    sign: int = 1

    def value(self) -> int:
        n = self.sign
        for p, e in self.pairs:
            n *= p**e
        return n

    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    def __str__(self) -> str:
        if not self.pairs:
            return str(self.sign)
        body = "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.pairs)
        return body if self.sign == 1 else f"-{body}"


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for arbitrary integers, not both zero."""
    if a == 0 and n == 0:
        raise ValueError("kronecker(0, 0) is undefined")
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    # factor out twos from n
    v = (n & -n).bit_length() - 1
    n >>= v
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def factor(n: int) -> Factorization:
    """Trial-division factorization of a nonzero integer."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    pairs = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            pairs.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        pairs.append((n, 1))
    return Factorization(tuple(pairs), sign)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def ord_p(n: int, p: int) -> int:
    """Exponent of the prime p in the nonzero integer n."""
    if n == 0:
        raise ValueError("ord of 0 is infinite")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def squarefree_part(n: int) -> int:
    """Product of the primes dividing n to an odd power."""
    if n < 1:
        raise ValueError(f"squarefree_part needs n >= 1, got {n}")
    out = 1
    for p, e in factor(n).pairs:
        if e % 2:
            out *= p
    return out


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def primes_up_to(bound: int) -> list[int]:
    """Sieve of Eratosthenes."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def find_primes_with_conditions(conds, bound: int) -> list[int]:
    """Primes p <= bound with kronecker(a, p) == eps for every (a, eps) in conds.

    An empty result is a valid answer.
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    conds = list(conds)
    for _, eps in conds:
        if eps not in (-1, 0, 1):
            raise ValueError(f"kronecker value must be -1, 0 or 1, got {eps}")
    return [p for p in primes_up_to(bound) if all(kronecker(a, p) == eps for a, eps in conds)]


def content(*values: int) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
