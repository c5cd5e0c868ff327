"""Valuation preserving automorphisms of a Hahn sum.

Every automorphism handled here is stored in the canonical form

    sigma = correction o lift(skel_part)

where ``lift`` is the canonical lift of a skeleton automorphism (move each
term along the chain, rescale its coefficient) and ``correction`` is a
unitriangular matrix.  The skeleton part is then exactly the automorphism
induced on the skeleton, the correction is the internal part, and the
internal/external decomposition is read off the fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import trimatrix as tm
from .element import HahnElement
from .errors import (
    FiniteChainRequired,
    IncoherentFamily,
    MissingBlock,
    NotInU,
    SkeletonMismatch,
)
from .skeleton import (
    ChainAut,
    Skeleton,
    SkeletonAut,
    compose_skeleton_auts,
    invert_skeleton_aut,
    lex_concat,
    require_same,
    shift_skeleton_aut,
)
from .trimatrix import TriMatrix


def lift_action(t: SkeletonAut, a: HahnElement) -> HahnElement:
    """``sum a_g 1_g  ->  sum t_g(a_g) 1_{t(g)}``."""
    require_same(t.skeleton, a.skeleton)
    return HahnElement(a.skeleton,
                       {g + t.shift: t.multiplier(g) * c for g, c in a.coeffs.items()})


def _diagonal_as_skeleton_aut(M: TriMatrix) -> SkeletonAut:
    return SkeletonAut(M.skeleton, 0, M.default_diag, dict(M.diag_items()))


@dataclass(frozen=True)
class VAut:
    """A valuation preserving automorphism in canonical form.

    A correction that is order preserving but not unitriangular is accepted
    and normalised: its diagonal is moved into the skeleton part.
    """

    correction: TriMatrix
    skel_part: SkeletonAut

    def __post_init__(self):
        M, t = self.correction, self.skel_part
        require_same(M.skeleton, t.skeleton)
        if not M.in_T:
            raise NotInU("correction must be an order preserving triangular unit")
        if not M.in_U1:
            # M = Md @ (Md^-1 @ M); as maps that is (Md^-1 @ M) after lift(d)
            d = _diagonal_as_skeleton_aut(M)
            M = tm.multiply(tm.invert(tm.diagonal_part(M)), M)
            t = compose_skeleton_auts(d, t)
            object.__setattr__(self, "correction", M)
            object.__setattr__(self, "skel_part", t)

    @classmethod
    def identity(cls, sk: Skeleton) -> VAut:
        return cls(TriMatrix.identity(sk), SkeletonAut.identity(sk))

    @property
    def skeleton(self) -> Skeleton:
        return self.skel_part.skeleton

    def __call__(self, a: HahnElement) -> HahnElement:
        return aut_apply(self, a)

    def compose(self, other: VAut) -> VAut:
        return compose(self, other)

    def inverse(self) -> VAut:
        return invert(self)


def aut_apply(sigma: VAut, a: HahnElement) -> HahnElement:
    if a.skeleton != sigma.skeleton:
        raise SkeletonMismatch("element and automorphism live over different skeletons")
    return tm.apply(lift_action(sigma.skel_part, a), sigma.correction)


def canonical_lift(t: SkeletonAut) -> VAut:
    return VAut(TriMatrix.identity(t.skeleton), t)


def compose(s1: VAut, s2: VAut) -> VAut:
    """``s1`` after ``s2``.

    ``C1 o L1 o C2 o L2 = C1 o (L1 C2 L1^-1) o (L1 L2)``; the two corrections
    are multiplied in order of application.
    """
    require_same(s1.skeleton, s2.skeleton)
    moved = tm.conjugate_by_lift(s2.correction, s1.skel_part)
    return VAut(tm.multiply(moved, s1.correction),
                compose_skeleton_auts(s1.skel_part, s2.skel_part))


def invert(sigma: VAut) -> VAut:
    t_inv = invert_skeleton_aut(sigma.skel_part)
    return VAut(tm.conjugate_by_lift(tm.invert(sigma.correction), t_inv), t_inv)


def induced_skeleton_aut(sigma: VAut) -> SkeletonAut:
    """The automorphism induced on the skeleton.

    The component map at ``g`` sends ``x`` to the coefficient of
    ``sigma(x 1_g)`` at ``sigma_Gamma(g)``: the skeleton multiplier at ``g``
    followed by the correction's diagonal entry at the image position.
    """
    t, C = sigma.skel_part, sigma.correction
    k = t.shift
    positions = set(t.exception_positions()) | {g - k for g, _ in C.diag_items()}
    exc = {g: C.diag(g + k) * t.multiplier(g) for g in positions}
    return SkeletonAut(sigma.skeleton, k, C.default_diag * t.default, exc)


def induced_chain_aut(sigma: VAut) -> ChainAut:
    return induced_skeleton_aut(sigma).chain_part


def is_internal(sigma: VAut) -> bool:
    return induced_skeleton_aut(sigma).is_identity


def decompose(sigma: VAut) -> tuple[VAut, VAut]:
    """``sigma = internal o external`` with ``external`` a canonical lift."""
    external = canonical_lift(induced_skeleton_aut(sigma))
    internal = compose(sigma, invert(external))
    return internal, external


def semidirect_factors(sigma: VAut) -> tuple[VAut, VAut, VAut]:
    """``sigma = unitriangular o diagonal o shift``.

    The last factor lifts a pure translation of the chain with identity
    component maps; the middle one lifts a skeleton automorphism fixing the
    chain; the first is internal.
    """
    t = induced_skeleton_aut(sigma)
    shift = shift_skeleton_aut(sigma.skeleton, t.shift)
    diag = compose_skeleton_auts(t, invert_skeleton_aut(shift))
    unitri = VAut(sigma.correction, SkeletonAut.identity(sigma.skeleton))
    return unitri, canonical_lift(diag), canonical_lift(shift)


def is_order_preserving_aut(sigma: VAut) -> bool:
    t = sigma.skel_part
    isos_ok = t.default > 0 and all(q > 0 for _, q in t.exceptions)
    return isos_ok and tm.is_order_preserving(sigma.correction)


# ---------------------------------------------------------------------------
# lifting from principal convex subgroups


@dataclass(frozen=True)
class ConvexFamily:
    """Isomorphisms ``C_g -> C_tau(g)`` for every position of a finite chain.

    ``blocks[g]`` is a matrix over the tail skeleton ``skeleton.tail(g)``
    (positions ``>= g`` relabelled from 0) describing the map on ``C_g``.
    On a finite chain the only chain automorphism is the identity, so each
    block maps ``C_g`` onto itself.
    """

    skeleton: Skeleton
    blocks: Mapping[int, TriMatrix]
    target: ChainAut = field(default_factory=ChainAut)

    def __post_init__(self):
        if not self.skeleton.is_finite:
            raise FiniteChainRequired("convex families are defined over finite chains")
        if not self.target.is_identity:
            raise FiniteChainRequired("a finite chain only has the identity automorphism")
        object.__setattr__(self, "blocks", dict(self.blocks))


def lift_from_convex_family(F: ConvexFamily) -> VAut:
    """Glue a coherent family of block isomorphisms into one automorphism.

    Coherence: for ``g > d`` the block at ``d`` restricted to positions
    ``>= g`` must equal the block at ``g``.  Restriction is transitive, so
    checking neighbouring positions is enough.  The glued map sends ``x`` to
    ``blocks[v(x)](x)``; its row at position ``a`` is the first row of the
    block at ``a``.
    """
    sk = F.skeleton
    n = sk.chain.n
    for g in range(n):
        if g not in F.blocks:
            raise MissingBlock(f"no block given for position {g}", pos=g)
        block = F.blocks[g]
        if block.skeleton != sk.tail(g):
            raise SkeletonMismatch(f"block {g} is not over the tail skeleton at {g}",
                                   pos=g)
        if not block.in_U:
            raise NotInU(f"block {g} is not an order preserving unit", pos=g)
    for d in range(n - 1):
        g = d + 1
        restricted = tm.restrict_tail(F.blocks[d], 1)
        diff = tm.first_difference(restricted, F.blocks[g])
        if diff is not None:
            row, col = diff
            raise IncoherentFamily(
                f"block {d} restricted to C_{g} differs from block {g} "
                f"at entry ({row + g},{col + g})",
                pair=[d, g], entry=[row + g, col + g],
                expected=str(restricted.entry(row, col)),
                found=str(F.blocks[g].entry(row, col)))
    entries: dict = {}
    for a in range(n):
        block = F.blocks[a]
        entries[a, a] = block.diag(0)
        for col, q in block.row(0):
            entries[a, col + a] = q
    return VAut(TriMatrix(sk, entries), SkeletonAut.identity(sk))


def convex_family_of(sigma: VAut) -> ConvexFamily:
    """The family of restrictions of an automorphism fixing the chain."""
    if not sigma.skeleton.is_finite:
        raise FiniteChainRequired("convex families are defined over finite chains")
    if sigma.skel_part.shift:
        raise FiniteChainRequired("only automorphisms fixing the chain restrict to C_g")
    M = tm.multiply(TriMatrix.diagonal(sigma.skeleton, dict(sigma.skel_part.exceptions),
                                       sigma.skel_part.default),
                    sigma.correction)
    return ConvexFamily(sigma.skeleton,
                        {g: tm.restrict_tail(M, g) for g in sigma.skeleton.positions()})


# ---------------------------------------------------------------------------
# lexicographic sums


def lex_sum_lift(s1: VAut, s2: VAut) -> VAut:
    """``g1 1_1 + g2 1_2 -> s1(g1) 1_1 + s2(g2) 1_2`` over the lexicographic sum."""
    sk = lex_concat(s1.skeleton, s2.skeleton)
    n1 = s1.skeleton.chain.n
    exc: dict[int, Fraction] = dict(s1.skel_part.exceptions)
    exc.update({g + n1: q for g, q in s2.skel_part.exceptions})
    return VAut(tm.block_sum(s1.correction, s2.correction), SkeletonAut(sk, 0, 1, exc))
