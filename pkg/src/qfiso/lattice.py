"""Positive definite Z-lattices of rank <= 4.

Gram matrices are exact (``Fraction`` entries).  Internally every search
works with the doubled Gram matrix ``2*M``, which is integral whenever the
diagonal is integral and off-diagonal entries lie in (1/2)Z, so all
acceptance tests are integer identities.  Floating point is only used for
enumeration bounds, which are padded; every candidate is then checked exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import gcd, isqrt

import numpy as np

from .arith import is_prime, kronecker
from .binform import Form

__all__ = [
    "Lattice",
    "Embedding",
    "SublatticeCountError",
    "NormPSearch",
    "parse_gram",
    "det",
    "norm_ideal",
    "scale_ideal",
    "scale",
    "binary_form_of",
    "lattice_of_form",
    "index_p_sublattices",
    "norm_p_sublattices",
    "vectors_with_norm",
    "represents_lattice",
    "is_isometric",
    "saturate",
    "saturation_index_by_minors",
    "has_norm_p_binary_sublattice",
    "lll_gram",
    "column_echelon",
    "canonical_gram",
]

Matrix = tuple[tuple[Fraction, ...], ...]


# ---------------------------------------------------------------- exact linear algebra


def det(M) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    out = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if A[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            A[i], A[piv] = A[piv], A[i]
            out = -out
        out *= A[i][i]
        for r in range(i + 1, n):
            f = A[r][i] / A[i][i]
            if f:
                for c in range(i, n):
                    A[r][c] -= f * A[i][c]
    return out


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _transpose(A):
    return [list(r) for r in zip(*A)]


def _congruence(T, M):
    """T^t M T."""
    return _matmul(_transpose(T), _matmul(M, T))


def _solve_rational(A, B):
    """X with A X = B for square nonsingular A (fractions)."""
    n = len(A)
    aug = [[Fraction(x) for x in A[i]] + [Fraction(x) for x in B[i]] for i in range(n)]
    for i in range(n):
        piv = next(r for r in range(i, n) if aug[r][i] != 0)
        aug[i], aug[piv] = aug[piv], aug[i]
        p = aug[i][i]
        aug[i] = [x / p for x in aug[i]]
        for r in range(n):
            if r != i and aug[r][i]:
                f = aug[r][i]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[i])]
    return [row[n:] for row in aug]


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def column_echelon(C):
    """Unimodular column reduction.

    Returns (H, U, pivots) with C U = H, U in GL_n(Z), the columns of H past
    len(pivots) zero, and H[pivots[j]][j] > 0 the first nonzero entry of column j.
    """
    r = len(C)
    n = len(C[0]) if r else 0
    H = [list(map(int, row)) for row in C]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    pivots = []
    col = 0
    for i in range(r):
        if col >= n:
            break
        for j in range(col + 1, n):
            if H[i][j] == 0:
                continue
            a, b = H[i][col], H[i][j]
            g, x, y = _xgcd(a, b)
            # [col, j] <- [col, j] @ [[x, -b/g], [y, a/g]]
            p, q = -b // g, a // g
            for M in (H, U):
                for row in M:
                    u, v = row[col], row[j]
                    row[col], row[j] = u * x + v * y, u * p + v * q
        if H[i][col] != 0:
            if H[i][col] < 0:
                for M in (H, U):
                    for row in M:
                        row[col] = -row[col]
            pivots.append(i)
            col += 1
    return H, U, pivots


def _solve_integer_system(C, rhs):
    """Integer solutions of C w = rhs as (w0, K): w = w0 + K z.  None if unsolvable."""
    n = len(C[0])
    H, U, pivots = column_echelon(C)
    rank = len(pivots)
    y = []
    for j, i in enumerate(pivots):
        s = rhs[i] - sum(H[i][k] * y[k] for k in range(j))
        if s % H[i][j]:
            return None
        y.append(s // H[i][j])
    # rows without a pivot must be consistent
    for i in range(len(C)):
        if sum(H[i][k] * y[k] for k in range(rank)) != rhs[i]:
            return None
    w0 = [sum(U[r][k] * y[k] for k in range(rank)) for r in range(n)]
    K = [row[rank:] for row in U]
    return w0, K


def lll_gram(G, delta: float = 0.99, max_iter: int = 100000):
    """LLL-reduce an integral positive definite Gram matrix.

    Returns (U, G') with U unimodular and G' = U^t G U.  Decisions use
    floating-point Gram-Schmidt data; U is exact, so the output is exact.
    """
    n = len(G)
    G0 = [list(map(int, row)) for row in G]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    if n <= 1:
        return U, G0
    Gc = [row[:] for row in G0]
    k = 1
    it = 0

    def gso(Gc):
        mu = [[0.0] * n for _ in range(n)]
        B = [0.0] * n
        for i in range(n):
            for j in range(i):
                mu[i][j] = (Gc[i][j] - sum(mu[j][t] * mu[i][t] * B[t] for t in range(j))) / B[j]
            B[i] = Gc[i][i] - sum(mu[i][t] ** 2 * B[t] for t in range(i))
        return mu, B

    def colop(j, src, q):
        # b_j <- b_j - q b_src
        for row in U:
            row[j] -= q * row[src]
        for row in Gc:
            row[j] -= q * row[src]
        for c in range(n):
            Gc[j][c] -= q * Gc[src][c]

    while k < n:
        it += 1
        if it > max_iter:
            raise RuntimeError("LLL did not converge")
        mu, B = gso(Gc)
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                colop(k, j, q)
                mu, B = gso(Gc)
        if B[k] < (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            for row in U:
                row[k], row[k - 1] = row[k - 1], row[k]
            for row in Gc:
                row[k], row[k - 1] = row[k - 1], row[k]
            Gc[k], Gc[k - 1] = Gc[k - 1], Gc[k]
            k = max(k - 1, 1)
        else:
            k += 1
    return U, Gc


# ---------------------------------------------------------------- enumeration core


def _ldl(A):
    """Float decomposition q(y) = sum_i d[i] * (y_i + sum_{j>i} u[i][j] y_j)^2."""
    n = len(A)
    a = [[float(x) for x in row] for row in A]
    d = [0.0] * n
    u = [[0.0] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        for j in range(i + 1, n):
            u[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= u[i][j] * a[i][k]
                a[k][j] = a[j][k]
    return d, u


def _enum_affine(A, h, c0: int, target: int):
    """Yield every integer z with z^t A z + 2 h.z + c0 == target.

    A is an integral positive definite k x k matrix, h an integer vector.
    The innermost coordinate is solved exactly as a quadratic equation; the
    outer coordinates are bounded by padded floating-point ellipsoid bounds.
    """
    k = len(A)
    if k == 0:
        if c0 == target:
            yield ()
        return
    A = [list(map(int, r)) for r in A]
    h = list(map(int, h))
    # center mu = -A^{-1} h
    if any(h):
        mu = [float(x) for x in np.linalg.solve(np.array(A, dtype=float), -np.array(h, dtype=float))]
    else:
        mu = [0.0] * k
    # q(z - mu) = target - c0 + mu^t A mu  (since F(z) = q(z - mu) - mu^t A mu + c0)
    muAmu = sum(mu[i] * A[i][j] * mu[j] for i in range(k) for j in range(k))
    R = target - c0 + muAmu
    slack = 1e-7 * (1.0 + abs(target) + abs(c0) + abs(muAmu))
    if R < -slack:
        return
    d, u = _ldl(A)
    z = [0] * k
    a00 = A[0][0]

    def leaf_solve(outer_lin0, outer_base):
        # A00 z0^2 + 2*lin0*z0 + base = target
        lin0, base = outer_lin0, outer_base
        disc = lin0 * lin0 - a00 * (base - target)
        if disc < 0:
            return
        r = isqrt(disc)
        if r * r != disc:
            return
        for num in sorted({-lin0 - r, -lin0 + r}):
            if num % a00 == 0:
                yield num // a00

    def rec(i, Rrem):
        # choose z_i for i >= 1 given z_{i+1..k-1}
        if i == 0:
            # exact solve for z0
            lin0 = h[0] + sum(A[0][j] * z[j] for j in range(1, k))
            base = c0 + sum(
                A[p][q] * z[p] * z[q] for p in range(1, k) for q in range(1, k)
            ) + 2 * sum(h[p] * z[p] for p in range(1, k))
            for z0 in leaf_solve(lin0, base):
                z[0] = z0
                yield tuple(z)
            return
        s = sum(u[i][j] * (z[j] - mu[j]) for j in range(i + 1, k))
        if Rrem < 0:
            Rrem = 0.0
        r = math.sqrt(Rrem / d[i])
        c = mu[i] - s
        lo = math.floor(c - r - 1e-9 * (1 + abs(c) + r))
        hi = math.ceil(c + r + 1e-9 * (1 + abs(c) + r))
        for zi in range(lo, hi + 1):
            t = zi - c
            R2 = Rrem - d[i] * t * t
            if R2 < -slack:
                continue
            z[i] = zi
            yield from rec(i - 1, R2)

    if k == 1:
        # a00 z^2 + 2 h0 z + c0 = target
        yield from ((z0,) for z0 in leaf_solve(h[0], c0))
        return
    yield from rec(k - 1, R)


# ---------------------------------------------------------------- lattices


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        f = Fraction(x)
        if f.denominator > 2:
            raise ValueError(f"inexact Gram entry {x}")
        return f
    return Fraction(x)


def parse_gram(text: str) -> Matrix:
    """Parse "a,b;c,d" (rows separated by ';', '/2' fractions allowed)."""
    rows = [r for r in text.replace(" ", "").split(";") if r]
    return tuple(tuple(_frac(x) for x in r.split(",")) for r in rows)


@dataclass(frozen=True)
class Lattice:
    """A positive definite lattice given by its Gram matrix in some basis."""

    gram: Matrix

    def __init__(self, gram):
        if isinstance(gram, str):
            g = parse_gram(gram)
        else:
            g = tuple(tuple(_frac(x) for x in row) for row in gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if not 1 <= n <= 4 or any(len(r) != n for r in g):
            raise ValueError(f"Gram matrix must be square of size 1..4, got {n} rows")
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix is not symmetric")
            if g[i][i].denominator != 1:
                raise ValueError("diagonal entries must be integers")
            for j in range(n):
                if (2 * g[i][j]).denominator != 1:
                    raise ValueError("off-diagonal entries must lie in (1/2)Z")
                if n >= 3 and g[i][j].denominator != 1:
                    raise ValueError("rank >= 3 lattices must have integral Gram matrices")
        for k in range(1, n + 1):
            if det([row[:k] for row in g[:k]]) <= 0:
                raise ValueError("Gram matrix is not positive definite")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def a2(self) -> tuple[tuple[int, ...], ...]:
        """The doubled Gram matrix 2M (integral)."""
        return tuple(tuple(int(2 * x) for x in row) for row in self.gram)

    @cached_property
    def disc(self) -> Fraction:
        return det(self.gram)

    def Q(self, v) -> Fraction:
        A = self.a2
        n = self.rank
        return Fraction(sum(v[i] * A[i][j] * v[j] for i in range(n) for j in range(n)), 2)

    def B(self, v, w) -> Fraction:
        A = self.a2
        n = self.rank
        return Fraction(sum(v[i] * A[i][j] * w[j] for i in range(n) for j in range(n)), 2)

    def sub(self, T) -> "Lattice":
        """The lattice spanned by the columns of T (in this lattice's basis)."""
        return Lattice(_congruence([list(map(int, r)) for r in T], self.gram))

    def to_json(self) -> list[list]:
        return [[_jsonify(x) for x in row] for row in self.gram]

    @classmethod
    def from_json(cls, rows) -> "Lattice":
        return cls([[_frac(x) for x in row] for row in rows])

    def __str__(self) -> str:
        return ";".join(",".join(str(x) for x in row) for row in self.gram)

    @classmethod
    def diag(cls, *entries) -> "Lattice":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])


def _jsonify(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


@dataclass(frozen=True)
class Embedding:
    """T with T^t M T equal to the target Gram; columns are images of the target basis."""

    T: tuple[tuple[int, ...], ...]

    def check(self, L: Lattice, target: Lattice) -> bool:
        return [list(r) for r in _congruence([list(r) for r in self.T], L.gram)] == [
            list(r) for r in target.gram
        ]

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(c) for c in zip(*self.T)]

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.T]


def norm_ideal(L: Lattice) -> int:
    """Positive generator of the ideal generated by all values Q(v)."""
    A = L.a2
    n = L.rank
    g = 0
    for i in range(n):
        g = gcd(g, A[i][i] // 2)
        for j in range(i + 1, n):
            g = gcd(g, A[i][j])
    return g


def scale_ideal(L: Lattice) -> Fraction:
    """Positive generator of the ideal generated by all B-values."""
    vals = [x for row in L.gram for x in row]
    num = 0
    den = 1
    for x in vals:
        den = den * x.denominator // gcd(den, x.denominator)
    for x in vals:
        num = gcd(num, int(x * den))
    return Fraction(num, den)


def scale(L: Lattice, factor) -> Lattice:
    """The lattice with Gram matrix multiplied by ``factor`` (rejected unless still admissible)."""
    f = _frac(factor) if not isinstance(factor, Fraction) else factor
    if f <= 0:
        raise ValueError("scale factor must be positive")
    return Lattice([[x * f for x in row] for row in L.gram])


def binary_form_of(L: Lattice) -> Form:
    if L.rank != 2:
        raise ValueError("binary_form_of needs a rank-2 lattice")
    A = L.a2
    return Form(A[0][0] // 2, A[0][1], A[1][1] // 2)


def lattice_of_form(f: Form) -> Lattice:
    return Lattice([[f.a, Fraction(f.b, 2)], [Fraction(f.b, 2), f.c]])


def index_p_sublattices(L: Lattice, p: int):
    """All p+1 sublattices of index p of a binary lattice, with basis-change matrices.

    Order: Z(px) + Zy first, then Z(x + uy) + Z(py) for u = 0..p-1.
    """
    if L.rank != 2:
        raise ValueError("index_p_sublattices needs a binary lattice")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    mats = [((p, 0), (0, 1))] + [((1, 0), (u, p)) for u in range(p)]
    return [(L.sub(T), T) for T in mats]


class SublatticeCountError(ValueError):
    def __init__(self, msg: str, count: int):
        super().__init__(msg)
        self.count = count


def norm_p_sublattices(L: Lattice, p: int):
    """The two index-p sublattices whose norm ideal lies in s*p*Z, where s*Z is the norm ideal of L.

    Requires kronecker(D_L / s^2, p) == 1.
    """
    if L.rank != 2:
        raise ValueError("norm_p_sublattices needs a binary lattice")
    s = norm_ideal(L)
    f = binary_form_of(L)
    D = f.disc // (s * s)
    subs = [(S, T) for S, T in index_p_sublattices(L, p) if norm_ideal(S) % (s * p) == 0]
    if kronecker(D, p) != 1:
        raise SublatticeCountError(
            f"p={p} is not split for D={D} (kronecker {kronecker(D, p)}); "
            f"{len(subs)} index-p sublattices have norm in {s * p}Z",
            len(subs),
        )
    if len(subs) != 2:
        raise SublatticeCountError(f"expected 2 sublattices, found {len(subs)}", len(subs))
    return subs[0], subs[1]


@lru_cache(maxsize=4096)
def _vectors_cached(A: tuple, m2: int) -> tuple[tuple[int, ...], ...]:
    k = len(A)
    U, G = lll_gram(A)
    out = []
    for z in _enum_affine(G, [0] * k, 0, m2):
        v = tuple(sum(U[i][j] * z[j] for j in range(k)) for i in range(k))
        out.append(v)
    out.sort()
    return tuple(out)


def vectors_with_norm(L: Lattice, m: int) -> list[tuple[int, ...]]:
    """All v with Q(v) == m, sorted."""
    if m < 0:
        raise ValueError("norm must be nonnegative")
    if m == 0:
        return [tuple([0] * L.rank)]
    out = list(_vectors_cached(L.a2, 2 * m))
    A = L.a2
    n = L.rank
    assert all(sum(v[i] * A[i][j] * v[j] for i in range(n) for j in range(n)) == 2 * m for v in out)
    return out


def _sign_normalized(v) -> bool:
    for x in v:
        if x:
            return x > 0
    return False


def _column_candidates(A, cols, targets2, m2):
    """Vectors w with w^t A w == m2 and cols[i]^t A w == targets2[i]."""
    n = len(A)
    if not cols:
        yield from _vectors_cached(tuple(tuple(r) for r in A), m2)
        return
    C = [[sum(c[i] * A[i][j] for i in range(n)) for j in range(n)] for c in cols]
    sol = _solve_integer_system(C, list(targets2))
    if sol is None:
        return
    w0, K = sol
    r = len(K[0]) if K and K[0] else 0
    if r == 0:
        if sum(w0[i] * A[i][j] * w0[j] for i in range(n) for j in range(n)) == m2:
            yield tuple(w0)
        return
    G = _congruence(K, A)
    U, G = lll_gram(G)
    K = _matmul(K, U)
    Aw0 = [sum(A[i][j] * w0[j] for j in range(n)) for i in range(n)]
    h = [sum(K[i][j] * Aw0[i] for i in range(n)) for j in range(r)]
    c0 = sum(w0[i] * Aw0[i] for i in range(n))
    for z in _enum_affine(G, h, c0, m2):
        yield tuple(w0[i] + sum(K[i][j] * z[j] for j in range(r)) for i in range(n))


def _embeddings(L: Lattice, target: Lattice):
    A = [list(r) for r in L.a2]
    T2 = target.a2
    m = target.rank
    cols: list[tuple[int, ...]] = []

    def rec(j):
        if j == m:
            yield list(cols)
            return
        for w in _column_candidates(A, cols, [T2[i][j] for i in range(j)], T2[j][j]):
            if j == 0 and not _sign_normalized(w):
                continue
            cols.append(w)
            yield from rec(j + 1)
            cols.pop()

    yield from rec(0)


def represents_lattice(L: Lattice, target: Lattice) -> Embedding | None:
    """An embedding of ``target`` into ``L``, or None.

    The witness is the first one in the (deterministic) search order; when the
    target Gram matrix is the leading block of L's, the coordinate inclusion
    is returned.
    """
    if target.rank > L.rank:
        return None
    m = target.rank
    if all(target.gram[i][j] == L.gram[i][j] for i in range(m) for j in range(m)):
        return Embedding(tuple(tuple(int(i == j) for j in range(m)) for i in range(L.rank)))
    for cols in _embeddings(L, target):
        E = Embedding(tuple(tuple(c[i] for c in cols) for i in range(L.rank)))
        assert E.check(L, target), "embedding failed exact verification"
        return E
    return None


def is_isometric(L1: Lattice, L2: Lattice) -> bool:
    """Equal rank and discriminant plus an embedding forces det T = +-1."""
    return L1.rank == L2.rank and L1.disc == L2.disc and represents_lattice(L1, L2) is not None


# ---------------------------------------------------------------- saturation


def saturate(L: Lattice, S):
    """Saturation of the sublattice spanned by the columns of S.

    Returns (basis, t): basis (n x k integer matrix, columns) of (Q S) cap L in
    L's coordinates and t = [saturation : S].
    """
    S = [list(map(int, r)) for r in S]
    n = len(S)
    if n != L.rank:
        raise ValueError("S must have one row per basis vector of L")
    k = len(S[0])
    _, _, piv = column_echelon(_transpose(S))
    if len(piv) != k:
        raise ValueError("S does not have full column rank")
    if k == n:
        sat = [[int(i == j) for j in range(n)] for i in range(n)]
    else:
        # N: integer basis of {y : y^t S = 0}; saturation = {x : N^t x = 0}
        _, U, piv = column_echelon(_transpose(S))
        N = [row[len(piv):] for row in U]
        _, U2, piv2 = column_echelon(_transpose(N))
        sat = [row[len(piv2):] for row in U2]
        sat = _hnf_columns(sat)
    # S = sat X
    StS = _congruence(sat, [[int(i == j) for j in range(n)] for i in range(n)])
    X = _solve_rational(StS, _matmul(_transpose(sat), S))
    t = abs(det(X))
    assert t.denominator == 1
    return sat, int(t)


def _hnf_columns(B):
    """Canonical basis of the column lattice of B (full column rank): reduced column echelon form."""
    H, _, piv = column_echelon(B)
    k = len(piv)
    H = [row[:k] for row in H]
    for j, i in enumerate(piv):
        for jj in range(j):
            q = H[i][jj] // H[i][j]
            if q:
                for row in H:
                    row[jj] -= q * row[j]
    return H


def saturation_index_by_minors(S) -> int:
    """gcd of the maximal minors of S, i.e. the index of S in its saturation."""
    S = [list(map(int, r)) for r in S]
    n, k = len(S), len(S[0])
    g = 0
    for rows in combinations(range(n), k):
        g = gcd(g, int(det([S[r] for r in rows])))
    return g


@dataclass
class NormPSearch:
    """Outcome of the bounded search for a primitive binary sublattice with norm in pZ.

    status is "found", "absent" (decided exactly) or "unknown" (bound exhausted).
    """

    status: str
    witness: list[list[int]] | None = None
    bound: int = 0

    def __bool__(self) -> bool:
        return self.status == "found"


def has_norm_p_binary_sublattice(L: Lattice, p: int, bound: int | None = None) -> NormPSearch:
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if L.rank < 2:
        return NormPSearch("absent", None, 0)
    if L.rank == 2:
        # the only primitive binary sublattice is L itself
        if norm_ideal(L) % p == 0:
            return NormPSearch("found", [[1, 0], [0, 1]], 0)
        return NormPSearch("absent", None, 0)
    if bound is None:
        bound = 4 * p * max(int(L.gram[i][i]) for i in range(L.rank))
    A = L.a2
    n = L.rank
    vecs = []
    for m in range(p, bound + 1, p):
        vecs.extend(v for v in vectors_with_norm(L, m) if _sign_normalized(v))
    for i, v in enumerate(vecs):
        Av = [sum(A[r][c] * v[c] for c in range(n)) for r in range(n)]
        for w in vecs[i + 1 :]:
            if sum(Av[r] * w[r] for r in range(n)) % p:
                continue
            S = [[v[r], w[r]] for r in range(n)]
            if saturation_index_by_minors(S) == 0:
                continue
            sat, _ = saturate(L, S)
            if norm_ideal(L.sub(sat)) % p == 0:
                return NormPSearch("found", sat, bound)
    return NormPSearch("unknown", None, bound)


# ---------------------------------------------------------------- canonical forms


def successive_minima(L: Lattice) -> list[int]:
    n = L.rank
    _, G = lll_gram(L.a2)
    bound = max(G[i][i] for i in range(n)) // 2
    minima: list[int] = []
    span: list = []
    for m in range(1, bound + 1):
        for v in vectors_with_norm(L, m):
            trial = span + [v]
            _, _, piv = column_echelon(trial)
            if len(piv) > len(span):
                span.append(v)
                minima.append(m)
        if len(minima) == n:
            break
    return minima


def canonical_gram(L: Lattice) -> tuple[tuple[int, ...], ...]:
    """Canonical Gram matrix of the isometry class of L (integral, rank <= 4).

    Among all bases v_1..v_n with Q(v_j) equal to the j-th successive
    minimum (such bases exist in rank <= 4) take the one whose off-diagonal
    entries (g12, g13, g23, g14, g24, g34) are lexicographically least.
    """
    n = L.rank
    if any(x.denominator != 1 for row in L.gram for x in row):
        raise ValueError("canonical_gram needs an integral Gram matrix")
    minima = successive_minima(L)
    A = L.a2
    pools = {m: vectors_with_norm(L, m) for m in set(minima)}
    Av = {v: [sum(A[r][c] * v[c] for c in range(n)) for r in range(n)] for vs in pools.values() for v in vs}
    best: list | None = None
    chosen: list = []

    def rec(j, key):
        nonlocal best
        if j == n:
            if abs(det([list(r) for r in zip(*chosen)])) == 1 and (best is None or key < best):
                best = list(key)
            return
        cands = sorted(
            ([sum(Av[c][r] * w[r] for r in range(n)) // 2 for c in chosen], w) for w in pools[minima[j]]
        )
        for entry, w in cands:
            nk = key + entry
            if best is not None and nk > best[: len(nk)]:
                break
            _, _, piv = column_echelon(chosen + [w])
            if len(piv) != j + 1:
                continue
            chosen.append(w)
            rec(j + 1, nk)
            chosen.pop()

    rec(0, [])
    if best is None:
        raise RuntimeError("no basis realizes the successive minima")
    out = [[0] * n for _ in range(n)]
    pos = 0
    for j in range(n):
        out[j][j] = minima[j]
        for i in range(j):
            out[i][j] = out[j][i] = best[pos]
            pos += 1
    return tuple(tuple(r) for r in out)
