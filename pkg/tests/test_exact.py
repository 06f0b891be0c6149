import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from unitroot.exact import (
    MultiQuadElement,
    QuadElement,
    exponent_vector,
    is_squarefree,
    mq_field_degree,
    mq_is_zero,
    quad_pow,
    squarefree_decompose,
)

from oracles import gf2_rank_bits


@pytest.mark.parametrize("n, s, d0", [(12, 2, 3), (-16, 4, -1), (-19, 1, -19), (1, 1, 1), (-1, 1, -1), (72, 6, 2)])
def test_squarefree_decompose(n, s, d0):
    dec = squarefree_decompose(n)
    assert (dec.square_part, dec.radical) == (s, d0)
    assert dec.square_part ** 2 * dec.radical == n


def test_squarefree_decompose_rejects_zero():
    with pytest.raises(ValueError):
        squarefree_decompose(0)


@given(st.integers(-10**6, 10**6).filter(bool))
def test_squarefree_decompose_roundtrip(n):
    dec = squarefree_decompose(n)
    assert dec.square_part ** 2 * dec.radical == n
    assert is_squarefree(dec.radical)


GAMMA = QuadElement(Fraction(1, 2), Fraction(1, 2), -19)  # root of x^2 - x + 5


def test_quad_pow_examples():
    assert quad_pow(GAMMA, 2, 1, 5) == QuadElement(Fraction(-9, 2), Fraction(1, 2), -19)
    assert quad_pow(GAMMA, 0, 1, 5) == 1
    inv = quad_pow(GAMMA, -1, 1, 5)
    assert inv == QuadElement(Fraction(1, 10), Fraction(-1, 10), -19)
    assert inv * GAMMA == 1


def test_quad_pow_rejects_wrong_polynomial():
    with pytest.raises(ValueError):
        quad_pow(GAMMA, 3, 2, 5)


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_quad_pow_is_a_homomorphism(j, k):
    assert quad_pow(GAMMA, j + k, 1, 5) == quad_pow(GAMMA, j, 1, 5) * quad_pow(GAMMA, k, 1, 5)


def test_quad_element_normalizes_rationals():
    x = QuadElement(3, 0, -7)
    assert x.d == 1 and x == 3
    with pytest.raises(ValueError):
        QuadElement(1, 1, 8)


def test_mq_is_zero_examples():
    assert not mq_is_zero(MultiQuadElement({2: 1, 3: -1}))
    assert mq_is_zero(MultiQuadElement({2: 2, 8: -1}))
    assert mq_is_zero(MultiQuadElement({}))


def test_multiplication_sign_rule():
    i = MultiQuadElement({-1: 1})
    assert i * i == -1
    # sqrt(-2) * sqrt(-3) = -sqrt(6)
    assert MultiQuadElement({-2: 1}) * MultiQuadElement({-3: 1}) == MultiQuadElement({6: -1})
    assert MultiQuadElement({-2: 1}) * MultiQuadElement({3: 1}) == MultiQuadElement({-6: 1})
    assert MultiQuadElement({6: 1}) * MultiQuadElement({10: 1}) == MultiQuadElement({15: 2})


@pytest.mark.parametrize("rads, degree", [({2, 3}, 4), ({2, 3, 6}, 4), (set(), 1), ({-1, -3, 3}, 4), ({-19}, 2)])
def test_field_degree(rads, degree):
    assert mq_field_degree(rads) == degree


def test_field_degree_of_sqrt2_plus_sqrt3_via_minimal_polynomial():
    # x^4 - 10x^2 + 1 vanishes at sqrt2 + sqrt3 and is irreducible over Q
    from sympy import Poly, sqrt, symbols, minimal_polynomial

    x = symbols("x")
    mp = Poly(minimal_polynomial(sqrt(2) + sqrt(3), x), x)
    assert mp.degree() == mq_field_degree({2, 3}) == 4


def test_field_degree_rejects_non_squarefree():
    with pytest.raises(ValueError):
        mq_field_degree({12})


squarefree = st.integers(-300, 300).filter(lambda d: d not in (0, 1) and is_squarefree(d))
small_q = st.fractions(min_value=-20, max_value=20, max_denominator=30)


@st.composite
def multiquads(draw, size=4):
    rads = draw(st.lists(squarefree | st.just(1), min_size=0, max_size=size, unique=True))
    return MultiQuadElement({d: draw(small_q) for d in rads})


@given(multiquads(), multiquads(), multiquads())
@settings(max_examples=60)
def test_multiplication_ring_laws(x, y, z):
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(multiquads(), multiquads())
@settings(max_examples=100)
def test_multiplication_matches_complex_evaluation(x, y):
    lhs = complex(x * y)
    rhs = complex(x) * complex(y)
    assert cmath.isclose(lhs, rhs, rel_tol=1e-9, abs_tol=1e-9)


@given(st.lists(squarefree, min_size=1, max_size=6, unique=True), st.data())
@settings(max_examples=200)
def test_nonzero_combinations_are_nonzero(rads, data):
    coeffs = data.draw(st.lists(small_q, min_size=len(rads), max_size=len(rads)).filter(any))
    x = MultiQuadElement(dict(zip(rads, coeffs)))
    assert not mq_is_zero(x)
    support = [d for d, c in zip(rads, coeffs) if c]
    assert mq_field_degree(x.support()) == mq_field_degree(support) == 2 ** gf2_rank_bits(support)


def test_exponent_vector():
    assert exponent_vector(-6) == {-1, 2, 3}
    assert exponent_vector(1) == frozenset()
