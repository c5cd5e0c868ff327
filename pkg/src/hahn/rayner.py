"""Group families of supports and the Rayner groups they cut out.

A group family is a nonempty collection of well ordered subsets of the chain
closed under binary unions and under taking subsets.  Every representable
support is finite, so well-orderedness is automatic.

On a finite chain a group family has a largest member (the union of all
members), and then contains all its subsets: the families are exactly the
powersets ``P(U)``.  :func:`family_from_generators` uses that closed form;
:mod:`hahn.testkit.oracles` checks it against brute force.

Over the integer chain two symbolic descriptors are supported: all finite
subsets, and all finite subsets of a set ``S`` given by an optional lower
bound and an optional periodic residue pattern.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, NamedTuple, Optional

from .autdecomp import canonical_lift
from .element import HahnElement
from .errors import FiniteChainRequired, PositionOutOfRange, SkeletonMismatch
from .skeleton import Skeleton, SkeletonAut, require_same


class Descriptor(str, Enum):
    EXPLICIT = "explicit"
    ALL_FINITE = "all_finite"
    FINITE_WITHIN = "finite_within"


def _sort_key(s: frozenset):
    return (len(s), sorted(s))


@dataclass(frozen=True)
class GroupFamily:
    skeleton: Skeleton
    descriptor: Descriptor
    sets: frozenset = field(default=frozenset())
    bound: Optional[int] = None
    period: Optional[int] = None
    residues: frozenset = field(default=frozenset())

    def __post_init__(self):
        object.__setattr__(self, "descriptor", Descriptor(self.descriptor))
        if self.descriptor is Descriptor.EXPLICIT:
            if not self.skeleton.is_finite:
                raise FiniteChainRequired("explicit families need a finite chain")
            object.__setattr__(self, "sets", _closure(self.skeleton, self.sets))
        elif self.descriptor is Descriptor.FINITE_WITHIN:
            if self.skeleton.is_finite:
                raise FiniteChainRequired("finite_within families live on the integer chain")
            if self.period is not None:
                if self.period < 1:
                    raise ValueError("period must be positive")
                object.__setattr__(
                    self, "residues", frozenset(r % self.period for r in self.residues))
            else:
                object.__setattr__(self, "residues", frozenset())

    @classmethod
    def explicit(cls, sk: Skeleton, sets: Iterable[Iterable[int]]) -> GroupFamily:
        return cls(sk, Descriptor.EXPLICIT, frozenset(frozenset(s) for s in sets))

    @classmethod
    def all_finite(cls, sk: Skeleton) -> GroupFamily:
        return cls(sk, Descriptor.ALL_FINITE)

    @classmethod
    def finite_within(cls, sk: Skeleton, bound: Optional[int] = None,
                      period: Optional[int] = None,
                      residues: Iterable[int] = ()) -> GroupFamily:
        return cls(sk, Descriptor.FINITE_WITHIN, bound=bound, period=period,
                   residues=frozenset(residues))

    def sorted_sets(self) -> list[frozenset]:
        return sorted(self.sets, key=_sort_key)

    # -- the allowed region S (finite_within) --------------------------------

    def allows(self, pos: int) -> bool:
        """Is ``pos`` in the region whose finite subsets form the family?"""
        if self.descriptor is Descriptor.FINITE_WITHIN:
            if self.bound is not None and pos < self.bound:
                return False
            if self.period is not None and pos % self.period not in self.residues:
                return False
            return True
        if self.descriptor is Descriptor.ALL_FINITE:
            return pos in self.skeleton
        return any(pos in s for s in self.sets)

    def region_representatives(self) -> list[int]:
        """One position per residue class of the region, each the least one
        available (or near zero when unbounded below).  Empty if the region is.
        """
        p = self.period or 1
        start = self.bound if self.bound is not None else 0
        return [x for x in range(start, start + p) if self.allows(x)]

    def __contains__(self, support) -> bool:
        support = frozenset(support)
        if self.descriptor is Descriptor.EXPLICIT:
            return support in self.sets
        return all(self.allows(g) for g in support)


class FamilyViolation(NamedTuple):
    condition: str
    missing: frozenset


def _closure(sk: Skeleton, gens: Iterable[Iterable[int]]) -> frozenset:
    union: set[int] = set()
    for s in gens:
        for g in s:
            if g not in sk:
                raise PositionOutOfRange(f"position {g!r} is not in the chain", pos=g)
        union.update(s)
    top = sorted(union)
    return frozenset(frozenset(c) for r in range(len(top) + 1)
                     for c in combinations(top, r))


def family_from_generators(sk: Skeleton, gens: Iterable[Iterable[int]]) -> GroupFamily:
    """The smallest group family containing ``gens``.

    Closing under unions puts the union ``U`` of all generators in the family
    and closing under subsets then yields ``P(U)``, which is already closed.
    """
    if not sk.is_finite:
        raise FiniteChainRequired("explicit families need a finite chain")
    return GroupFamily.explicit(sk, gens)


def is_group_family(sk: Skeleton, sets: Iterable[Iterable[int]]):
    """Check union and subset closure literally.

    Returns ``(True, None)`` or ``(False, FamilyViolation)`` naming the first
    missing set.
    """
    if not sk.is_finite:
        raise FiniteChainRequired("explicit families need a finite chain")
    members = {frozenset(s) for s in sets}
    for s in members:
        for g in s:
            sk.check_position(g)
    if not members:
        return False, FamilyViolation("nonempty", frozenset())
    ordered = sorted(members, key=_sort_key)
    for a in ordered:
        for g in sorted(a):
            b = a - {g}
            if b not in members:
                return False, FamilyViolation("subset", b)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if a | b not in members:
                return False, FamilyViolation("union", a | b)
    return True, None


def rayner_contains(F: GroupFamily, a: HahnElement) -> bool:
    if a.skeleton != F.skeleton:
        raise SkeletonMismatch("element and family live over different skeletons")
    return a.support in F


# ---------------------------------------------------------------------------
# stability under skeleton automorphisms


def _image(t: SkeletonAut, T: frozenset) -> frozenset:
    return frozenset(t(g) for g in T)


def setwise_witness(F: GroupFamily, t: SkeletonAut) -> Optional[frozenset]:
    """A member ``T`` with ``t(T)`` outside ``F``, or None if ``F`` is stable."""
    require_same(F.skeleton, t.skeleton)
    if F.descriptor is Descriptor.EXPLICIT:
        for T in F.sorted_sets():
            if _image(t, T) not in F:
                return T
        return None
    if F.descriptor is Descriptor.ALL_FINITE:
        return None
    # finite subsets of S are stable iff S + k is inside S; the residue
    # pattern must be invariant and the least element must not drop below
    # the bound
    k = t.shift
    if F.period is not None:
        for r in sorted(F.residues):
            if (r + k) % F.period not in F.residues:
                return frozenset({_least_with_residue(F, r)})
    reps = F.region_representatives()
    if F.bound is not None and reps and min(reps) + k < F.bound:
        return frozenset({min(reps)})
    return None


def _least_with_residue(F: GroupFamily, r: int) -> int:
    start = F.bound if F.bound is not None else 0
    return start + (r - start) % F.period


def is_stable_setwise(F: GroupFamily, t: SkeletonAut) -> bool:
    return setwise_witness(F, t) is None


def pointwise_witness(F: GroupFamily, t: SkeletonAut) -> Optional[frozenset]:
    """A member ``T`` with ``t(T) != T``, or None."""
    require_same(F.skeleton, t.skeleton)
    if F.descriptor is Descriptor.EXPLICIT:
        for T in F.sorted_sets():
            if _image(t, T) != T:
                return T
        return None
    if t.shift == 0:
        return None
    reps = F.region_representatives()
    return frozenset({reps[0]}) if reps else None


def is_stable_pointwise(F: GroupFamily, t: SkeletonAut) -> bool:
    return pointwise_witness(F, t) is None


def _probe_elements(F: GroupFamily) -> Iterable[tuple[frozenset, HahnElement]]:
    sk = F.skeleton
    if F.descriptor is Descriptor.EXPLICIT:
        for T in F.sorted_sets():
            yield T, HahnElement(sk, {g: 1 for g in T})
    else:
        # G(F) is generated by the basis elements it contains; for a
        # periodic region bounded below the least representatives of each
        # residue class are the extreme cases
        reps = F.region_representatives()
        for g in reps:
            yield frozenset({g}), HahnElement.basis(sk, g)
        if reps:
            yield frozenset(reps), HahnElement(sk, {g: 1 for g in reps})


def canonical_lift_witness(F: GroupFamily, t: SkeletonAut) -> Optional[frozenset]:
    """Push elements of ``G(F)`` through the canonical lift of ``t`` and
    return the support of one that leaves ``G(F)``, or None."""
    require_same(F.skeleton, t.skeleton)
    lift = canonical_lift(t)
    for T, g in _probe_elements(F):
        if not rayner_contains(F, lift(g)):
            return T
    return None


def canonical_lift_closed(F: GroupFamily, t: SkeletonAut) -> bool:
    return canonical_lift_witness(F, t) is None
