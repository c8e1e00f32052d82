"""Positive definite binary quadratic forms and the form class group.

A form (a, b, c) stands for a*x^2 + b*x*y + c*y^2 with discriminant
b^2 - 4ac < 0.  Classes are keyed by their unique reduced representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd, isqrt

__all__ = [
    "Form",
    "FormClass",
    "ClassGroup",
    "reduce",
    "reduce_gl2",
    "discriminant",
    "is_valid_discriminant",
    "reduced_forms",
    "class_group",
    "form_class",
    "compose",
    "inverse",
    "identity",
    "ambiguous_classes",
    "genus_of",
    "has_order_4_element",
]


@dataclass(frozen=True, order=True)
class Form:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.b * self.b - 4 * self.a * self.c >= 0:
            raise ValueError(f"{tuple(self)} is not positive definite")

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return gcd(gcd(self.a, self.b), self.c)

    def is_primitive(self) -> bool:
        return self.content == 1

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def transform(self, m) -> "Form":
        """The form f(px + qy, rx + sy) for m = ((p, q), (r, s))."""
        (p, q), (r, s) = m
        a, b, c = self.a, self.b, self.c
        return Form(
            a * p * p + b * p * r + c * r * r,
            2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            a * q * q + b * q * s + c * s * s,
        )

    @classmethod
    def parse(cls, text: str) -> "Form":
        parts = [int(t) for t in text.replace("(", "").replace(")", "").split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected a,b,c, got {text!r}")
        return cls(*parts)


def discriminant(f: Form) -> int:
    return f.disc


def is_valid_discriminant(D: int) -> bool:
    return D < 0 and D % 4 in (0, 1)


def _matmul(m, n):
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def reduce(f: Form):
    """Gaussian reduction under SL2(Z).

    Returns (g, T) with g reduced and f.transform(T) == g, det T == 1.
    """
    a, b, c = f
    T = ((1, 0), (0, 1))
    while True:
        # normalize: -a < b <= a
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            b, c = b + 2 * k * a, a * k * k + b * k + c
            T = _matmul(T, ((1, k), (0, 1)))
        if a > c:
            a, b, c = c, -b, a
            T = _matmul(T, ((0, -1), (1, 0)))
            continue
        if a == c and b < 0:
            b = -b
            T = _matmul(T, ((0, -1), (1, 0)))
        break
    g = Form(a, b, c)
    return g, T


def reduce_gl2(f: Form) -> Form:
    """Reduced representative up to GL2(Z), i.e. up to isometry of the lattice."""
    g, _ = reduce(f)
    return Form(g.a, abs(g.b), g.c)


@lru_cache(maxsize=None)
def reduced_forms(D: int) -> tuple[Form, ...]:
    """All reduced primitive forms of discriminant D, sorted."""
    if not is_valid_discriminant(D):
        raise ValueError(f"invalid discriminant {D}: need D < 0 and D = 0, 1 mod 4")
    out = []
    for a in range(1, isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append(Form(a, b, c))
    return tuple(sorted(out))


@dataclass(frozen=True, order=True)
class FormClass:
    """A proper equivalence class, keyed by its reduced representative."""

    repr: Form

    @property
    def D(self) -> int:
        return self.repr.disc

    def __str__(self) -> str:
        return str(self.repr)

    def __mul__(self, other: "FormClass") -> "FormClass":
        return compose(self, other)

    def __invert__(self) -> "FormClass":
        return inverse(self)


def form_class(f) -> FormClass:
    """Class of a primitive form, given as a Form or an (a, b, c) triple."""
    if not isinstance(f, Form):
        f = Form(*f)
    if not f.is_primitive():
        raise ValueError(f"{f} is not primitive")
    return FormClass(reduce(f)[0])


def identity(D: int) -> FormClass:
    if not is_valid_discriminant(D):
        raise ValueError(f"invalid discriminant {D}")
    if D % 4 == 0:
        return FormClass(Form(1, 0, -D // 4))
    return FormClass(Form(1, 1, (1 - D) // 4))


def inverse(x: FormClass) -> FormClass:
    a, b, c = x.repr
    return FormClass(reduce(Form(a, -b, c))[0])


def _xgcd(a: int, b: int):
    """(g, u, v) with u*a + v*b == g == gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def compose_forms(f1: Form, f2: Form) -> Form:
    """Dirichlet composition of two primitive forms of equal discriminant, unreduced."""
    D = f1.disc
    if f2.disc != D:
        raise ValueError(f"discriminant mismatch: {f1.disc} vs {f2.disc}")
    a1, b1, _ = f1
    a2, b2, _ = f2
    s = (b1 + b2) // 2
    # e = gcd(a1, a2, s) = u*a1 + v*a2 + w*s
    g1, u1, v1 = _xgcd(a1, a2)
    e, t, w = _xgcd(g1, s)
    v = t * v1
    A = a1 * a2 // (e * e)
    # B = b2 + 2*(a2/e)*(v*(s - b2) - w*c2)  mod 2A, the standard united-forms middle coefficient
    c2 = f2.c
    B = b2 + 2 * (a2 // e) * (v * (s - b2) - w * c2)
    B %= 2 * A
    if B > A:
        B -= 2 * A
    num = B * B - D
    if num % (4 * A):
        raise ArithmeticError(f"composition of {f1} and {f2} failed")
    return Form(A, B, num // (4 * A))


def compose(x: FormClass, y: FormClass) -> FormClass:
    if x.D != y.D:
        raise ValueError(f"discriminant mismatch: {x.D} vs {y.D}")
    return FormClass(reduce(compose_forms(x.repr, y.repr))[0])


@dataclass(frozen=True)
class ClassGroup:
    """The group of primitive classes of discriminant D with its composition table."""

    D: int
    elements: tuple[FormClass, ...]
    table: tuple[tuple[int, ...], ...] = field(repr=False)

    @cached_property
    def index(self) -> dict[FormClass, int]:
        return {x: i for i, x in enumerate(self.elements)}

    @property
    def h(self) -> int:
        return len(self.elements)

    @property
    def identity_index(self) -> int:
        return self.index[identity(self.D)]

    @property
    def identity(self) -> FormClass:
        return identity(self.D)

    def mul(self, x: FormClass, y: FormClass) -> FormClass:
        return self.elements[self.table[self.index[x]][self.index[y]]]

    def inv(self, x: FormClass) -> FormClass:
        return inverse(x)

    def power(self, x: FormClass, k: int) -> FormClass:
        if k < 0:
            x, k = self.inv(x), -k
        r = self.identity
        for _ in range(k):
            r = self.mul(r, x)
        return r

    @cached_property
    def orders(self) -> tuple[int, ...]:
        e = self.identity_index
        out = []
        for i in range(self.h):
            k, j = 1, i
            while j != e:
                j = self.table[j][i]
                k += 1
            out.append(k)
        return tuple(out)

    def order(self, x: FormClass) -> int:
        return self.orders[self.index[x]]

    @cached_property
    def ambiguous_flags(self) -> tuple[bool, ...]:
        e = self.identity_index
        return tuple(self.table[i][i] == e for i in range(self.h))

    @cached_property
    def squares(self) -> frozenset[FormClass]:
        return frozenset(self.elements[self.table[i][i]] for i in range(self.h))

    @cached_property
    def genera(self) -> tuple[tuple[FormClass, ...], ...]:
        """Cosets of the principal genus, each sorted; the principal genus first."""
        seen: set[FormClass] = set()
        cosets = []
        principal = sorted(self.squares, key=lambda x: self.index[x])
        # principal genus first, then by smallest member index
        for x in [self.identity, *self.elements]:
            if x in seen:
                continue
            coset = tuple(sorted({self.mul(x, sq) for sq in principal}, key=lambda y: self.index[y]))
            seen.update(coset)
            cosets.append(coset)
        return tuple(cosets)

    @cached_property
    def _genus_id(self) -> dict[FormClass, int]:
        return {x: gid for gid, coset in enumerate(self.genera) for x in coset}

    def genus_id(self, x: FormClass) -> int:
        return self._genus_id[x]

    def genus(self, x: FormClass) -> tuple[FormClass, ...]:
        return self.genera[self.genus_id(x)]

    def structure(self) -> list[int]:
        """Invariant factors d1 | d2 | ... of the group (empty for the trivial group)."""
        from .arith import factor

        primary: dict[int, list[int]] = {}
        for p, e in factor(self.h).pairs:
            # killed[k] = #{x : x^(p^k) = 1}; log_p of successive ratios counts factors of exponent >= k
            killed = [1]
            while killed[-1] < p**e:
                k = len(killed)
                killed.append(sum(1 for o in self.orders if p**k % o == 0))
            at_least = []
            for k in range(1, len(killed)):
                q, r = killed[k] // killed[k - 1], 0
                while q > 1:
                    q //= p
                    r += 1
                at_least.append(r)
            at_least.append(0)
            exps = []
            for k in range(1, len(at_least)):
                exps += [p**k] * (at_least[k - 1] - at_least[k])
            primary[p] = sorted(exps, reverse=True)
        if not primary:
            return []
        width = max(len(v) for v in primary.values())
        factors = []
        for i in range(width):
            d = 1
            for v in primary.values():
                if i < len(v):
                    d *= v[i]
            factors.append(d)
        return sorted(factors)

    def structure_str(self) -> str:
        s = self.structure()
        if not s:
            return "trivial"
        return " x ".join(f"Z/{d}Z" for d in s)


@lru_cache(maxsize=None)
def class_group(D: int) -> ClassGroup:
    elements = tuple(FormClass(f) for f in reduced_forms(D))
    idx = {x: i for i, x in enumerate(elements)}
    table = tuple(tuple(idx[compose(x, y)] for y in elements) for x in elements)
    return ClassGroup(D, elements, table)


def ambiguous_classes(G: ClassGroup) -> list[FormClass]:
    return [x for x, amb in zip(G.elements, G.ambiguous_flags) if amb]


def genus_of(x: FormClass, G: ClassGroup) -> int:
    """Genus id of x: 0 is the principal genus."""
    return G.genus_id(x)


def has_order_4_element(G: ClassGroup) -> bool:
    return 4 in G.orders
