from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfiso.binform import (
    Form,
    class_group,
    compose,
    form_class,
    has_order_4_element,
    identity,
    inverse,
    reduce,
    reduce_gl2,
    reduced_forms,
)
from qfiso.represent import represents

DISCS = [D for D in range(-3, -401, -1) if D % 4 in (0, 1)]


@st.composite
def forms(draw):
    a = draw(st.integers(1, 60))
    c = draw(st.integers(1, 60))
    b = draw(st.integers(-2 * min(a, c) + 1, 2 * min(a, c) - 1))
    return Form(a, b, c)


@st.composite
def unimodular(draw):
    # words in the generators S = (0 -1; 1 0) and T^k = (1 k; 0 1)
    M = ((1, 0), (0, 1))
    for k in draw(st.lists(st.integers(-4, 4), max_size=6)):
        M = _mul(_mul(M, ((1, k), (0, 1))), ((0, -1), (1, 0)))
    return M


def _mul(A, B):
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(2)) for j in range(2)) for i in range(2))


def test_form_validation():
    with pytest.raises(ValueError):
        Form(1, 3, 1)  # indefinite
    with pytest.raises(ValueError):
        Form(-1, 0, -1)
    assert Form.parse("2,1,3").disc == -23


@given(forms())
def test_reduce_returns_transform(f):
    g, T = reduce(f)
    assert g.is_reduced()
    assert f.transform(T) == g
    (p, q), (r, s) = T
    assert p * s - q * r == 1
    assert reduce(g)[0] == g


@given(forms(), unimodular())
def test_reduce_is_class_invariant(f, T):
    assert reduce(f.transform(T))[0] == reduce(f)[0]


def test_reduced_forms_brute_force():
    for D in DISCS[:60]:
        brute = set()
        for a in range(1, 40):
            for b in range(-a, a + 1):
                if (b * b - D) % (4 * a) == 0:
                    c = (b * b - D) // (4 * a)
                    f = Form(a, b, c)
                    if f.is_reduced() and f.is_primitive():
                        brute.add(f)
        assert set(reduced_forms(D)) == brute


def test_reduced_forms_rejects_bad_discriminant():
    for D in (-1, -2, 5, 0):
        with pytest.raises(ValueError):
            reduced_forms(D)


@pytest.mark.parametrize(
    "D,h,structure",
    [(-3, 1, []), (-4, 1, []), (-23, 3, [3]), (-39, 4, [4]), (-56, 4, [4]), (-84, 4, [2, 2]), (-420, 8, [2, 2, 2])],
)
def test_class_group_known(D, h, structure):
    G = class_group(D)
    assert G.h == h
    assert G.structure() == structure


@pytest.mark.parametrize("D", DISCS)
def test_group_axioms(D):
    G = class_group(D)
    els = G.elements
    e = G.identity
    for x in els:
        assert G.mul(e, x) == x
        assert G.mul(x, G.inv(x)) == e
        for y in els:
            assert G.mul(x, y) == G.mul(y, x) == compose(x, y)
    if G.h <= 12:
        for x, y, z in product(els, repeat=3):
            assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))


@pytest.mark.parametrize("D", [-23, -39, -47, -56, -71, -84, -104, -155])
def test_represented_products(D):
    # m -> x and n -> y implies mn -> xy
    G = class_group(D)
    for x, y in product(G.elements, repeat=2):
        xs = [m for m in range(1, 30) if represents(x, m)]
        ys = [m for m in range(1, 30) if represents(y, m)]
        xy = compose(x, y)
        for m in xs[:5]:
            for n in ys[:5]:
                assert represents(xy, m * n)


@pytest.mark.parametrize("D", DISCS)
def test_genera_count_equals_ambiguous_count(D):
    G = class_group(D)
    assert len(G.genera) == sum(G.ambiguous_flags)
    assert sum(len(g) for g in G.genera) == G.h


def _all_represented(C, bound):
    return {m for m in range(1, bound) if represents(C, m)}


@pytest.mark.parametrize("D", [D for D in range(-3, -501, -1) if D % 4 in (0, 1)])
def test_order4_iff_nontrivial_ambiguous_square(D):
    G = class_group(D)
    amb_nontrivial_square = any(
        f and x != G.identity and x in G.squares for x, f in zip(G.elements, G.ambiguous_flags)
    )
    assert has_order_4_element(G) == amb_nontrivial_square


def test_inverse_and_identity():
    x = form_class(Form(2, 1, 3))
    assert compose(x, inverse(x)) == identity(-23)
    assert ~x == inverse(x)
    assert x * identity(-23) == x


def test_compose_mismatch_raises():
    with pytest.raises(ValueError):
        compose(form_class(Form(2, 1, 3)), identity(-39))


def test_non_primitive_class_raises():
    with pytest.raises(ValueError):
        form_class(Form(2, 2, 2))


@given(forms())
def test_gl2_reduction_merges_inverse_pairs(f):
    if f.is_primitive():
        g = reduce(f)[0]
        assert reduce_gl2(f) == reduce_gl2(Form(g.a, -g.b, g.c))
