"""Finite-support elements of a Hahn sum, their valuation and lex order."""

from __future__ import annotations

import math
from enum import IntEnum
from fractions import Fraction
from functools import total_ordering
from types import MappingProxyType
from typing import Mapping, Union

from .errors import InadmissibleHom, SkeletonMismatch
from .skeleton import Skeleton, Tag, as_rational, lex_concat, require_same

#: Valuation of the zero element.  ``math.inf`` compares above every position.
INFINITY = math.inf

Valuation = Union[int, float]


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@total_ordering
class HahnElement:
    """``sum a_g 1_g`` with finitely many nonzero coefficients.

    Zero coefficients are never stored, so :attr:`support` is exactly the
    key set of :attr:`coeffs`.  Instances are immutable.
    """

    __slots__ = ("skeleton", "_coeffs", "_hash")

    def __init__(self, skeleton: Skeleton, coeffs: Mapping | None = None):
        clean: dict[int, Fraction] = {}
        for pos, c in (coeffs or {}).items():
            c = as_rational(c)
            if not c:
                continue
            tag = skeleton.component(pos)
            if tag is Tag.Z and c.denominator != 1:
                raise InadmissibleHom(
                    f"coefficient {c} at Z position {pos} is not an integer",
                    pos=pos, coeff=str(c))
            clean[pos] = c
        self.skeleton = skeleton
        self._coeffs = clean
        self._hash = None

    @classmethod
    def zero(cls, skeleton: Skeleton) -> HahnElement:
        return cls(skeleton)

    @classmethod
    def basis(cls, skeleton: Skeleton, pos: int, coeff=1) -> HahnElement:
        return cls(skeleton, {pos: coeff})

    @property
    def coeffs(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._coeffs)

    @property
    def support(self) -> frozenset:
        return frozenset(self._coeffs)

    def terms(self) -> list[tuple[int, Fraction]]:
        return sorted(self._coeffs.items())

    def coefficient(self, pos: int) -> Fraction:
        return self._coeffs.get(pos, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HahnElement):
            return NotImplemented
        return self.skeleton == other.skeleton and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.skeleton, frozenset(self._coeffs.items())))
        return self._hash

    def __lt__(self, other: HahnElement) -> bool:
        return lex_compare(self, other) is Ordering.LESS

    def __add__(self, other: HahnElement) -> HahnElement:
        return add(self, other)

    def __neg__(self) -> HahnElement:
        return negate(self)

    def __sub__(self, other: HahnElement) -> HahnElement:
        return add(self, negate(other))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*1@{g}" for g, c in self.terms()) or "0"
        return f"HahnElement({body})"


def _check_same(a: HahnElement, b: HahnElement) -> Skeleton:
    if a.skeleton != b.skeleton:
        raise SkeletonMismatch("elements live over different skeletons")
    return a.skeleton


def add(a: HahnElement, b: HahnElement) -> HahnElement:
    sk = _check_same(a, b)
    out = dict(a._coeffs)
    for g, c in b._coeffs.items():
        out[g] = out.get(g, 0) + c
    return HahnElement(sk, out)


def negate(a: HahnElement) -> HahnElement:
    return HahnElement(a.skeleton, {g: -c for g, c in a._coeffs.items()})


def valuation(a: HahnElement) -> Valuation:
    """``min supp(a)``, or :data:`INFINITY` for zero."""
    return min(a._coeffs) if a._coeffs else INFINITY


def leading_coefficient(a: HahnElement) -> Fraction:
    return a._coeffs[min(a._coeffs)] if a._coeffs else Fraction(0)


def sign(a: HahnElement) -> int:
    lc = leading_coefficient(a)
    return (lc > 0) - (lc < 0)


def lex_compare(a: HahnElement, b: HahnElement) -> Ordering:
    _check_same(a, b)
    return Ordering(sign(a - b))


def in_convex_subgroup(x: HahnElement, gamma: int) -> bool:
    """Membership in ``C_gamma = {x : v(x) >= gamma}``."""
    x.skeleton.check_position(gamma)
    return valuation(x) >= gamma


def lex_embed(x: HahnElement, sk1: Skeleton, sk2: Skeleton, side: int) -> HahnElement:
    """Embed an element of one summand into the lexicographic sum ``sk1 + sk2``."""
    target = lex_concat(sk1, sk2)
    if side == 1:
        require_same(x.skeleton, sk1)
        offset = 0
    elif side == 2:
        require_same(x.skeleton, sk2)
        offset = sk1.chain.n
    else:
        raise ValueError(f"side must be 1 or 2, got {side!r}")
    return HahnElement(target, {g + offset: c for g, c in x._coeffs.items()})
