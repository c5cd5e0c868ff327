import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hahn.element import (
    HahnElement,
    Ordering,
    add,
    in_convex_subgroup,
    leading_coefficient,
    lex_compare,
    lex_embed,
    negate,
    sign,
    valuation,
)
from hahn.errors import InadmissibleHom, PositionOutOfRange, SkeletonMismatch
from hahn.skeleton import finite_skeleton, integer_skeleton, lex_concat
from hahn.testkit import Generator, GenConfig

Q8 = finite_skeleton("Q" * 8)
ZQ = integer_skeleton("Q")


def e(sk, **terms):
    return HahnElement(sk, {int(k[1:]): v for k, v in terms.items()})


def test_construction_drops_zeros():
    a = HahnElement(Q8, {0: 0, 1: "2/4"})
    assert a.support == {1} and a.coefficient(1) == Fraction(1, 2)
    assert HahnElement.basis(Q8, 3).terms() == [(3, 1)]


def test_integrality_enforced():
    sk = finite_skeleton("ZQ")
    with pytest.raises(InadmissibleHom):
        HahnElement(sk, {0: Fraction(1, 2)})
    HahnElement(sk, {0: 3, 1: Fraction(1, 2)})
    with pytest.raises(PositionOutOfRange):
        HahnElement(sk, {5: 1})


def test_addition():
    a = HahnElement(Q8, {0: 2, 1: 3})
    zero = HahnElement.zero(Q8)
    assert add(a, zero) == a
    assert add(a, HahnElement(Q8, {0: -2})) == HahnElement(Q8, {1: 3})
    half = HahnElement(Q8, {0: Fraction(1, 2)})
    third = HahnElement(Q8, {0: Fraction(1, 3)})
    assert (half + third).coefficient(0) == Fraction(5, 6)
    assert negate(a) + a == zero
    with pytest.raises(SkeletonMismatch):
        add(a, HahnElement.zero(finite_skeleton("Q")))


def test_valuation():
    assert valuation(HahnElement.zero(Q8)) == math.inf
    assert valuation(HahnElement(Q8, {2: 1, 7: 5})) == 2
    a, b = HahnElement.basis(Q8, 1), HahnElement.basis(Q8, 3)
    assert valuation(a + b) == 1 == min(valuation(a), valuation(b))
    assert valuation(HahnElement(ZQ, {-5: 1, 3: 1})) == -5


def test_lex_compare():
    a = HahnElement(Q8, {0: 1, 1: 2})
    assert lex_compare(a, a) is Ordering.EQUAL
    neg = HahnElement(Q8, {0: -1, 1: 100})
    assert lex_compare(neg, HahnElement.zero(Q8)) is Ordering.LESS
    # a - b = -2*1@0 + 3*1@1, leading coefficient -2
    assert lex_compare(HahnElement.basis(Q8, 1, 3), HahnElement.basis(Q8, 0, 2)) is Ordering.LESS
    assert sign(neg) == -1 and leading_coefficient(neg) == -1
    assert sign(HahnElement.zero(Q8)) == 0
    assert neg < HahnElement.zero(Q8) < a


def test_convex_subgroup():
    assert in_convex_subgroup(HahnElement.zero(Q8), 4)
    assert in_convex_subgroup(HahnElement(Q8, {1: 1, 2: 1}), 1)
    assert not in_convex_subgroup(HahnElement.basis(Q8, 0), 1)
    with pytest.raises(PositionOutOfRange):
        in_convex_subgroup(HahnElement.zero(Q8), 9)


def test_lex_embed():
    sk1, sk2 = finite_skeleton("QQ"), finite_skeleton("Z")
    target = lex_concat(sk1, sk2)
    assert lex_embed(HahnElement.basis(sk2, 0), sk1, sk2, 2) == HahnElement.basis(target, 2)
    assert lex_embed(HahnElement.zero(sk1), sk1, sk2, 1) == HahnElement.zero(target)


def test_lex_embed_preserves_order():
    gen = Generator(GenConfig(seed=7))
    for _ in range(100):
        sk1, sk2 = gen.finite_skeleton(), gen.finite_skeleton()
        side, sk = (1, sk1) if gen.rng.random() < 0.5 else (2, sk2)
        a, b = gen.element(sk), gen.element(sk)
        assert lex_compare(a, b) == lex_compare(lex_embed(a, sk1, sk2, side),
                                                lex_embed(b, sk1, sk2, side))


def test_hash_and_equality():
    a = HahnElement(Q8, {1: 2})
    assert a == HahnElement(Q8, {1: Fraction(4, 2), 3: 0})
    assert hash(a) == hash(HahnElement(Q8, {1: 2}))
    assert a != HahnElement(finite_skeleton("Q" * 7), {1: 2})


terms = st.dictionaries(st.integers(-6, 6),
                        st.fractions(min_value=-20, max_value=20, max_denominator=12),
                        max_size=6)


@settings(max_examples=200, deadline=None)
@given(terms, terms, terms)
def test_ordered_group_laws(x, y, z):
    a, b, c = (HahnElement(ZQ, t) for t in (x, y, z))
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert valuation(a + b) >= min(valuation(a), valuation(b))
    if valuation(a) != valuation(b):
        assert valuation(a + b) == min(valuation(a), valuation(b))
    assert (a < b) == (a + c < b + c)
    assert [a < b, a == b, b < a].count(True) == 1


def test_valuation_random_min_of_support():
    rng = random.Random(1)
    for _ in range(200):
        coeffs = {rng.randint(-9, 9): rng.randint(1, 5) for _ in range(rng.randint(1, 5))}
        assert valuation(HahnElement(ZQ, coeffs)) == min(coeffs)
