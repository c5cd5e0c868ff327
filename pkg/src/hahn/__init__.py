"""Exact computations in Hahn sums over finite chains and the integers.

Elements, the canonical valuation and lexicographic order live in
:mod:`hahn.element`; endomorphisms as triangular matrices in
:mod:`hahn.trimatrix`; automorphisms, their decomposition and the lifting
constructions in :mod:`hahn.autdecomp`; group families of supports in
:mod:`hahn.rayner`.
"""

from .autdecomp import (
    ConvexFamily,
    VAut,
    canonical_lift,
    compose,
    decompose,
    induced_skeleton_aut,
    invert,
    lex_sum_lift,
    lift_from_convex_family,
)
from .element import HahnElement, lex_compare, valuation
from .errors import HahnError
from .rayner import GroupFamily, canonical_lift_closed, is_stable_setwise
from .skeleton import (
    FiniteChain,
    IntegerChain,
    Skeleton,
    SkeletonAut,
    Tag,
    finite_skeleton,
    integer_skeleton,
)
from .trimatrix import TriMatrix, apply, factor_U1_Ud, invert as invert_matrix, multiply

__all__ = [
    "ConvexFamily", "VAut", "canonical_lift", "compose", "decompose",
    "induced_skeleton_aut", "invert", "lex_sum_lift", "lift_from_convex_family",
    "HahnElement", "lex_compare", "valuation", "HahnError",
    "GroupFamily", "canonical_lift_closed", "is_stable_setwise",
    "FiniteChain", "IntegerChain", "Skeleton", "SkeletonAut", "Tag",
    "finite_skeleton", "integer_skeleton",
    "TriMatrix", "apply", "factor_U1_Ud", "invert_matrix", "multiply",
]
