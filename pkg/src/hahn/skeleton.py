"""Chains, component groups and skeleton automorphisms.

A skeleton ``[Gamma; {A_g}]`` pairs a chain of positions with a component
group at every position.  Two chains are supported: a finite chain
``{0, ..., n-1}`` and the integers.  Components are either ``Z`` or ``Q``
with their usual order, so every homomorphism between components is
multiplication by a rational and all bookkeeping stays exact.

Composition convention everywhere: ``compose(s, t)`` is ``s`` after ``t``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import (
    EmptyTagList,
    InadmissibleHom,
    InfiniteConcat,
    InvalidChain,
    LengthMismatch,
    NotAnAutomorphism,
    ParseError,
    PositionOutOfRange,
    SkeletonMismatch,
    TagPatternBroken,
)

Rational = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def as_rational(value: Rational) -> Fraction:
    """Coerce ``value`` to an exact :class:`Fraction`.

    Floats and booleans are refused: nothing in this package is allowed to
    pass through binary floating point.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if not m or (m.group(2) is not None and int(m.group(2)) == 0):
            raise ParseError(f"not a rational literal: {value!r}")
        return Fraction(int(m.group(1)), int(m.group(2) or 1))
    raise TypeError(f"cannot interpret {value!r} as a rational")


class Tag(str, Enum):
    Z = "Z"
    Q = "Q"

    def __str__(self) -> str:
        return self.value


def _as_tag(value) -> Tag:
    try:
        return Tag(str(value))
    except ValueError:
        raise ParseError(f"unknown component tag {value!r}") from None


# ---------------------------------------------------------------------------
# chains


@dataclass(frozen=True)
class FiniteChain:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidChain(f"a finite chain needs n >= 1, got {self.n!r}")

    is_finite = True

    def __contains__(self, pos) -> bool:
        return isinstance(pos, int) and 0 <= pos < self.n

    def positions(self) -> range:
        return range(self.n)


@dataclass(frozen=True)
class IntegerChain:
    is_finite = False

    def __contains__(self, pos) -> bool:
        return isinstance(pos, int) and not isinstance(pos, bool)

    def positions(self):
        raise InfiniteConcat("the integer chain has infinitely many positions")


Chain = Union[FiniteChain, IntegerChain]


@dataclass(frozen=True)
class ChainAut:
    """An order automorphism of a chain; translations are the only ones."""

    shift: int = 0

    def __call__(self, pos: int) -> int:
        return pos + self.shift

    def compose(self, other: ChainAut) -> ChainAut:
        return ChainAut(self.shift + other.shift)

    def inverse(self) -> ChainAut:
        return ChainAut(-self.shift)

    @property
    def is_identity(self) -> bool:
        return self.shift == 0


# ---------------------------------------------------------------------------
# skeletons


def _minimal_period(tags: tuple) -> tuple:
    p = len(tags)
    for d in range(1, p + 1):
        if p % d == 0 and tags == tags[:d] * (p // d):
            return tags[:d]
    return tags


@dataclass(frozen=True)
class Skeleton:
    """A chain together with its component tags.

    For the integer chain ``tags`` is a repeating pattern; position ``g`` has
    component ``tags[g % len(tags)]``.  The pattern is reduced to its minimal
    period on construction so equal skeletons compare equal.
    """

    chain: Chain
    tags: tuple

    def __post_init__(self):
        tags = tuple(_as_tag(t) for t in self.tags)
        if not tags:
            raise EmptyTagList("a skeleton needs at least one component tag")
        if self.chain.is_finite:
            if len(tags) != self.chain.n:
                raise LengthMismatch(
                    f"{len(tags)} tags for a chain of {self.chain.n} positions",
                    tags=len(tags), n=self.chain.n)
        else:
            tags = _minimal_period(tags)
        object.__setattr__(self, "tags", tags)

    @property
    def is_finite(self) -> bool:
        return self.chain.is_finite

    @property
    def period(self) -> int:
        return len(self.tags)

    def __len__(self) -> int:
        if not self.is_finite:
            raise TypeError("the integer chain has no finite length")
        return self.chain.n

    def __contains__(self, pos) -> bool:
        return pos in self.chain

    def positions(self) -> range:
        return self.chain.positions()

    def check_position(self, pos: int) -> None:
        if pos not in self.chain:
            raise PositionOutOfRange(f"position {pos!r} is not in the chain", pos=pos)

    def component(self, pos: int) -> Tag:
        self.check_position(pos)
        if self.is_finite:
            return self.tags[pos]
        return self.tags[pos % len(self.tags)]

    def has_tag(self, tag: Tag) -> bool:
        return tag in self.tags

    def tail(self, start: int) -> Skeleton:
        """The skeleton of positions ``>= start``, relabelled from 0."""
        if not self.is_finite:
            raise InfiniteConcat("tails are only taken of finite chains")
        self.check_position(start)
        return Skeleton(FiniteChain(self.chain.n - start), self.tags[start:])

    def __str__(self) -> str:
        if self.is_finite:
            return f"[{{0..{self.chain.n - 1}}}; {','.join(map(str, self.tags))}]"
        return f"[Z; ({','.join(map(str, self.tags))})*]"


def make_skeleton(chain: Chain, tags: Iterable) -> Skeleton:
    return Skeleton(chain, tuple(tags))


def finite_skeleton(tags: Iterable) -> Skeleton:
    tags = tuple(tags)
    if not tags:
        raise EmptyTagList("a skeleton needs at least one component tag")
    return Skeleton(FiniteChain(len(tags)), tags)


def integer_skeleton(pattern: Iterable) -> Skeleton:
    return Skeleton(IntegerChain(), tuple(pattern))


def require_same(*skeletons: Skeleton) -> Skeleton:
    first = skeletons[0]
    for other in skeletons[1:]:
        if other != first:
            raise SkeletonMismatch(f"skeletons differ: {first} vs {other}")
    return first


def validate_chain_aut(sk: Skeleton, shift: int) -> ChainAut:
    if not isinstance(shift, int) or isinstance(shift, bool):
        raise NotAnAutomorphism(f"shift must be an integer, got {shift!r}")
    if sk.is_finite:
        if shift != 0:
            raise NotAnAutomorphism(
                "a finite chain has only the identity automorphism", shift=shift)
    elif shift % sk.period:
        raise TagPatternBroken(
            f"shift {shift} does not preserve the tag pattern "
            f"{''.join(map(str, sk.tags))}", shift=shift)
    return ChainAut(shift)


def lex_concat(sk1: Skeleton, sk2: Skeleton) -> Skeleton:
    """Lexicographic sum of two finite skeletons: ``sk1`` below ``sk2``."""
    if not (sk1.is_finite and sk2.is_finite):
        raise InfiniteConcat("only finite skeletons can be concatenated")
    return Skeleton(FiniteChain(sk1.chain.n + sk2.chain.n), sk1.tags + sk2.tags)


# ---------------------------------------------------------------------------
# component homomorphisms


def hom_admissible(domain: Tag, codomain: Tag, q: Fraction) -> bool:
    if domain is Tag.Q and codomain is Tag.Z:
        return q == 0
    if domain is Tag.Z and codomain is Tag.Z:
        return q.denominator == 1
    return True


def iso_admissible(domain: Tag, codomain: Tag, q: Fraction) -> bool:
    if domain is not codomain:
        return False
    return q == 1 if domain is Tag.Z else q > 0


def unit_admissible(tag: Tag, q: Fraction) -> bool:
    """Is multiplication by ``q`` invertible in ``End(A)``?"""
    return abs(q) == 1 if tag is Tag.Z else q != 0


@dataclass(frozen=True)
class ComponentHom:
    """Multiplication by ``multiplier`` from one component into another."""

    domain: Tag
    codomain: Tag
    multiplier: Fraction

    def __post_init__(self):
        object.__setattr__(self, "domain", _as_tag(self.domain))
        object.__setattr__(self, "codomain", _as_tag(self.codomain))
        q = as_rational(self.multiplier)
        object.__setattr__(self, "multiplier", q)
        if not hom_admissible(self.domain, self.codomain, q):
            raise InadmissibleHom(
                f"no homomorphism {self.domain}->{self.codomain} multiplies by {q}",
                domain=str(self.domain), codomain=str(self.codomain), q=str(q))

    def __call__(self, x: Fraction) -> Fraction:
        return self.multiplier * x

    def compose(self, other: ComponentHom) -> ComponentHom:
        """``self`` after ``other``."""
        if other.codomain is not self.domain:
            raise InadmissibleHom("homomorphisms are not composable")
        return ComponentHom(other.domain, self.codomain, self.multiplier * other.multiplier)

    def __add__(self, other: ComponentHom) -> ComponentHom:
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise InadmissibleHom("can only add parallel homomorphisms")
        return ComponentHom(self.domain, self.codomain, self.multiplier + other.multiplier)

    @property
    def is_order_iso(self) -> bool:
        return iso_admissible(self.domain, self.codomain, self.multiplier)


class ComponentIso(ComponentHom):
    """An order isomorphism between components (``Z->Z`` by 1, ``Q->Q`` by q > 0)."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_order_iso:
            raise InadmissibleHom(
                f"{self.domain}->{self.codomain} by {self.multiplier} "
                "is not an order isomorphism")

    def inverse(self) -> ComponentIso:
        return ComponentIso(self.codomain, self.domain, 1 / self.multiplier)


def validate_hom(d, c, q: Rational) -> ComponentHom:
    return ComponentHom(_as_tag(d), _as_tag(c), as_rational(q))


def validate_iso(d, c, q: Rational) -> ComponentIso:
    return ComponentIso(_as_tag(d), _as_tag(c), as_rational(q))


# ---------------------------------------------------------------------------
# skeleton automorphisms


@dataclass(frozen=True)
class SkeletonAut:
    """``[tau_Gamma; {tau_g}]`` described by a shift and per-position multipliers.

    ``default`` is the multiplier used at every ``Q`` position without an
    explicit exception; ``Z`` positions always use 1 (the only order
    automorphism of ``Z``).  The stored form is canonical: exceptions equal
    to the default are dropped and, on finite chains, the default is folded
    into the exceptions so that equality is structural.
    """

    skeleton: Skeleton
    shift: int = 0
    default: Fraction = Fraction(1)
    exceptions: tuple = field(default=())

    def __post_init__(self):
        sk = self.skeleton
        validate_chain_aut(sk, self.shift)
        default = as_rational(self.default)
        if default <= 0:
            raise InadmissibleHom(f"default multiplier {default} is not positive")
        given: dict[int, Fraction] = {}
        for pos, q in dict(self.exceptions).items():
            sk.check_position(pos)
            q = as_rational(q)
            tag = sk.component(pos)
            if not iso_admissible(tag, tag, q):
                raise InadmissibleHom(
                    f"multiplier {q} at position {pos} is not an order automorphism "
                    f"of {tag}", pos=pos, q=str(q))
            given[pos] = q
        if sk.is_finite or not sk.has_tag(Tag.Q):
            full = {g: given.get(g, default if sk.component(g) is Tag.Q else Fraction(1))
                    for g in (sk.positions() if sk.is_finite else given)}
            exc = {g: q for g, q in full.items() if q != 1}
            default = Fraction(1)
        else:
            exc = {g: q for g, q in given.items()
                   if sk.component(g) is Tag.Q and q != default}
        object.__setattr__(self, "default", default)
        object.__setattr__(self, "exceptions", tuple(sorted(exc.items())))
        object.__setattr__(self, "_exc", exc)

    @classmethod
    def identity(cls, sk: Skeleton) -> SkeletonAut:
        return cls(sk)

    @property
    def chain_part(self) -> ChainAut:
        return ChainAut(self.shift)

    def __call__(self, pos: int) -> int:
        return pos + self.shift

    def multiplier(self, pos: int) -> Fraction:
        q = self._exc.get(pos)
        if q is not None:
            return q
        return self.default if self.skeleton.component(pos) is Tag.Q else Fraction(1)

    def iso(self, pos: int) -> ComponentIso:
        tag = self.skeleton.component(pos)
        return ComponentIso(tag, tag, self.multiplier(pos))

    def exception_positions(self) -> Iterator[int]:
        return (g for g, _ in self.exceptions)

    @property
    def is_identity(self) -> bool:
        return self.shift == 0 and self.default == 1 and not self.exceptions

    def compose(self, other: SkeletonAut) -> SkeletonAut:
        return compose_skeleton_auts(self, other)

    def inverse(self) -> SkeletonAut:
        return invert_skeleton_aut(self)


def compose_skeleton_auts(s: SkeletonAut, t: SkeletonAut) -> SkeletonAut:
    """``s`` after ``t``."""
    sk = require_same(s.skeleton, t.skeleton)
    candidates = set(t.exception_positions())
    candidates.update(g - t.shift for g in s.exception_positions())
    exc = {g: s.multiplier(g + t.shift) * t.multiplier(g) for g in candidates}
    return SkeletonAut(sk, s.shift + t.shift, s.default * t.default, exc)


def invert_skeleton_aut(t: SkeletonAut) -> SkeletonAut:
    exc = {g + t.shift: 1 / q for g, q in t.exceptions}
    return SkeletonAut(t.skeleton, -t.shift, 1 / t.default, exc)


def diagonal_skeleton_aut(sk: Skeleton, multipliers: Mapping[int, Rational],
                          default: Rational = 1) -> SkeletonAut:
    return SkeletonAut(sk, 0, as_rational(default), dict(multipliers))


def shift_skeleton_aut(sk: Skeleton, shift: int) -> SkeletonAut:
    """The skeleton automorphism translating by ``shift`` with identity components."""
    return SkeletonAut(sk, shift)
