"""Representation of integers by binary forms, classes and genera."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .arith import factor, kronecker, primes_up_to, squarefree_part
from .binform import ClassGroup, Form, FormClass, class_group

__all__ = [
    "RepSolution",
    "solutions",
    "represents",
    "represents_form",
    "weight",
    "psi",
    "primitive_count",
    "classes_representing",
    "represented_by_genus",
    "no_class_represents_iff",
    "PrimeReport",
    "classify_np2_primes",
]

# beyond this the vectorized membership test could overflow int64
_NP_LIMIT = 1 << 52


@dataclass(frozen=True)
class RepSolution:
    x: int
    y: int
    primitive: bool


def _bounds(f: Form, n: int) -> tuple[int, int]:
    D = -f.disc
    return isqrt(4 * f.c * n // D), isqrt(4 * f.a * n // D)


def solutions(f: Form, n: int) -> list[RepSolution]:
    """Every integer solution of f(x, y) = n, sorted by (y, x)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    a, b, c = f
    D = f.disc
    _, ybound = _bounds(f, n)
    out = []
    for y in range(-ybound, ybound + 1):
        # a x^2 + b y x + (c y^2 - n) = 0
        disc = D * y * y + 4 * a * n
        if disc < 0:
            continue
        r = isqrt(disc)
        if r * r != disc:
            continue
        xs = {(-b * y + r), (-b * y - r)}
        for num in sorted(xs):
            if num % (2 * a) == 0:
                x = num // (2 * a)
                out.append(RepSolution(x, y, gcd(x, y) == 1))
    assert all(f(s.x, s.y) == n for s in out)
    return out


@lru_cache(maxsize=1 << 20)
def represents_form(a: int, b: int, c: int, n: int) -> bool:
    """True iff a x^2 + b x y + c y^2 = n has an integer solution."""
    if n == 0:
        return True
    if n < 0:
        return False
    D = b * b - 4 * a * c
    ybound = isqrt(4 * a * n // -D)
    if 4 * a * n >= _NP_LIMIT or ybound < 16:
        for y in range(0, ybound + 1):
            disc = D * y * y + 4 * a * n
            r = isqrt(disc)
            if r * r == disc and ((r - b * y) % (2 * a) == 0 or (-r - b * y) % (2 * a) == 0):
                return True
        return False
    # y -> -y with x -> -x is a symmetry, so y >= 0 suffices
    y = np.arange(0, ybound + 1, dtype=np.int64)
    disc = D * y * y + 4 * a * n
    r = np.floor(np.sqrt(disc.astype(np.float64))).astype(np.int64)
    # exact integer correction of the float square root
    r -= r * r > disc
    r += (r + 1) * (r + 1) <= disc
    ok = r * r == disc
    if not ok.any():
        return False
    by = b * y
    ok &= ((r - by) % (2 * a) == 0) | ((-r - by) % (2 * a) == 0)
    return bool(ok.any())


def represents(C: FormClass, n: int) -> bool:
    a, b, c = C.repr
    return represents_form(a, b, c, n)


def weight(D: int) -> int:
    return {-3: 6, -4: 4}.get(D, 2)


def _check_coprime(n: int, D: int) -> None:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if gcd(n, D) != 1:
        raise ValueError(f"requires gcd(n, D) = 1, got gcd({n}, {D}) = {gcd(n, D)}")


def psi(n: int, D: int) -> int:
    """Closed-form number of primitive representations of n, summed over a full set of
    class representatives of disc D: w * sum of (D/t) over squarefree t | n."""
    _check_coprime(n, D)
    total = 0
    for t in range(1, n + 1):
        if n % t == 0 and all(e == 1 for _, e in factor(t).pairs):
            total += kronecker(D, t)
    return weight(D) * total


def total_rep_count(n: int, D: int) -> int:
    """w * sum of (D/t) over all t | n: the number of all (not only primitive)
    representations. Agrees with psi exactly when n is squarefree."""
    _check_coprime(n, D)
    return weight(D) * sum(kronecker(D, t) for t in range(1, n + 1) if n % t == 0)


def primitive_count(n: int, D: int) -> int:
    """Brute-force count of primitive solutions of f(x,y) = n, summed over reduced forms of disc D."""
    G = class_group(D)
    return sum(
        1 for C in G.elements for s in solutions(C.repr, n) if s.primitive
    )


def all_solutions_count(n: int, D: int) -> int:
    """Brute-force count of all solutions of f(x,y) = n, summed over reduced forms of disc D."""
    return sum(len(solutions(C.repr, n)) for C in class_group(D).elements)


def classes_representing(n: int, G: ClassGroup) -> list[FormClass]:
    return [C for C in G.elements if represents(C, n)]


def represented_by_genus(n: int, C: FormClass, G: ClassGroup) -> bool:
    """n -> gen(C), decided as: some class of the genus of C represents n."""
    return any(represents(X, n) for X in G.genus(C))


def no_class_represents_iff(n: int, D: int):
    """Evaluate "some prime p | sf(n) has (D/p) = -1"; returns (flag, witness prime or None)."""
    if gcd(n, D) != 1:
        raise ValueError(f"requires gcd(n, D) = 1, got n={n}, D={D}")
    for p in factor(squarefree_part(n)).primes():
        if kronecker(D, p) == -1:
            return True, p
    return False, None


@dataclass
class PrimeReport:
    """Primes p <= bound split by whether n p^2 is represented by C.

    For p not dividing D, ``predicted`` comes from the class criterion
    (p -> X with n -> C X^2) and ``observed`` from direct search.
    """

    n: int
    C: FormClass
    bound: int
    predicted: list[int]
    observed: list[int]
    dividing_D: dict[int, bool]
    case: int

    @property
    def agree(self) -> bool:
        return self.predicted == self.observed


def classify_np2_primes(n: int, C: FormClass, G: ClassGroup, bound: int) -> PrimeReport:
    if represents(C, n):
        raise ValueError(f"{n} is represented by {C}; classification needs n not represented")
    if not G.elements or C.D != G.D:
        raise ValueError("class does not belong to the group")
    if not classes_representing(n, G):
        case = 1
    elif not represented_by_genus(n, C, G):
        case = 2
    else:
        case = 3
    a, b, c = C.repr
    predicted, observed, dividing = [], [], {}
    for p in primes_up_to(bound):
        hit = represents_form(a, b, c, n * p * p)
        if G.D % p == 0:
            dividing[p] = hit
            continue
        if hit:
            observed.append(p)
        if any(represents(X, p) and represents(G.mul(C, G.mul(X, X)), n) for X in G.elements):
            predicted.append(p)
    return PrimeReport(n, C, bound, predicted, observed, dividing, case)
