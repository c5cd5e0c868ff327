"""Naive reference implementations used only to cross-check the library.

Nothing in the main modules imports from here.
"""

from __future__ import annotations

from itertools import combinations

from ..element import HahnElement
from ..errors import ChainTooLarge, FiniteChainRequired, SkeletonMismatch
from ..rayner import GroupFamily
from ..skeleton import Skeleton
from ..trimatrix import TriMatrix


def oracle_apply(a: HahnElement, M: TriMatrix) -> HahnElement:
    """Row vector times matrix by a dense double loop over a position window."""
    if a.skeleton != M.skeleton:
        raise SkeletonMismatch("element and matrix live over different skeletons")
    sk = a.skeleton
    if not a:
        return HahnElement.zero(sk)
    support = list(a.coeffs)
    hi = max(support + list(M.explicit_positions()))
    out = {}
    for beta in range(min(support), hi + 1):
        if beta not in sk:
            continue
        total = 0
        for alpha in support:
            total += M.entry(alpha, beta) * a.coefficient(alpha)
        out[beta] = total
    return HahnElement(sk, out)


def _check_small(sk: Skeleton) -> int:
    if not sk.is_finite:
        raise FiniteChainRequired("families are enumerated over finite chains")
    n = sk.chain.n
    if n > 4:
        raise ChainTooLarge(f"enumeration is capped at 4 positions, got {n}", n=n)
    return n


def _is_family_mask(fam: int, n: int) -> bool:
    if not fam & 1:  # a nonempty family closed under subsets contains the empty set
        return False
    members = [s for s in range(1 << n) if fam >> s & 1]
    for s in members:
        for g in range(n):
            if s >> g & 1 and not fam >> (s & ~(1 << g)) & 1:
                return False
    for s, t in combinations(members, 2):
        if not fam >> (s | t) & 1:
            return False
    return True


def _mask_to_sets(mask: int) -> frozenset:
    return frozenset(g for g in range(mask.bit_length()) if mask >> g & 1)


def _raw_families(n: int) -> list[frozenset]:
    out = []
    for fam in range(1 << (1 << n)):
        if _is_family_mask(fam, n):
            out.append(frozenset(_mask_to_sets(s) for s in range(1 << n) if fam >> s & 1))
    return out


def enumerate_group_families(sk: Skeleton) -> list[GroupFamily]:
    """Every group family over a chain of at most 4 positions, by brute force
    over all ``2 ** (2 ** n)`` collections of subsets."""
    return [GroupFamily.explicit(sk, sets) for sets in _raw_families(_check_small(sk))]


def oracle_closure(sk: Skeleton, gens) -> frozenset:
    """Smallest family containing ``gens``: intersect every family containing them."""
    gens = {frozenset(s) for s in gens}
    best = None
    for sets in _raw_families(_check_small(sk)):
        if gens <= sets:
            best = sets if best is None else best & sets
    return best
