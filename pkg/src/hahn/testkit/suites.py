"""Named randomized property checks.

Each :class:`Property` pairs a case drawer with a predicate.  The same checks
back ``hahn selftest`` and the acceptance tests.  A failing case is shrunk
greedily (drop terms, entries, exceptions) before it is reported.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Optional

from .. import autdecomp as ad
from .. import serialize as ser
from .. import trimatrix as tm
from ..autdecomp import VAut
from ..element import (
    HahnElement,
    in_convex_subgroup,
    leading_coefficient,
    lex_embed,
    valuation,
)
from ..rayner import GroupFamily, rayner_contains
from ..skeleton import Skeleton, SkeletonAut, compose_skeleton_auts
from ..trimatrix import TriMatrix
from .generators import Generator, GenConfig
from .oracles import oracle_apply


@dataclass(frozen=True)
class Property:
    name: str
    draw: Callable[[Generator], tuple]
    check: Callable[..., bool]


@dataclass
class Failure:
    name: str
    case: tuple
    error: Optional[str] = None

    def to_json(self) -> dict:
        out = {"property": self.name, "counterexample": [describe(x) for x in self.case]}
        if self.error:
            out["exception"] = self.error
        return out


# ---------------------------------------------------------------------------
# predicates


def ultrametric(a: HahnElement, b: HahnElement) -> bool:
    va, vb, vs = valuation(a), valuation(b), valuation(a + b)
    if vs < min(va, vb):
        return False
    return va == vb or vs == min(va, vb)


def negation_symmetry(a: HahnElement) -> bool:
    return valuation(-a) == valuation(a) and (-a).support == a.support


def translation_invariant(a: HahnElement, b: HahnElement, c: HahnElement) -> bool:
    if a < b:
        return a + c < b + c
    if b < a:
        return b + c < a + c
    return a == b and a + c == b + c


def total_order(a: HahnElement, b: HahnElement) -> bool:
    return [a < b, a == b, b < a].count(True) == 1


def positive_leading(a: HahnElement) -> bool:
    zero = HahnElement.zero(a.skeleton)
    return (a > zero) == (bool(a) and leading_coefficient(a) > 0)


def apply_matches_oracle(a: HahnElement, M: TriMatrix) -> bool:
    return tm.apply(a, M) == oracle_apply(a, M)


def end_ring_product(a: HahnElement, M: TriMatrix, N: TriMatrix) -> bool:
    return tm.apply(a, tm.multiply(M, N)) == tm.apply(tm.apply(a, M), N)


def apply_additive(a: HahnElement, b: HahnElement, M: TriMatrix) -> bool:
    return tm.apply(a + b, M) == tm.apply(a, M) + tm.apply(b, M)


def order_preserving_matrix(M: TriMatrix, a: HahnElement) -> bool:
    """``M`` in T and ``a > 0`` give ``aM > 0`` with the same valuation."""
    b = tm.apply(a, M)
    zero = HahnElement.zero(a.skeleton)
    return b > zero and valuation(b) == valuation(a)


def factor_round_trip(M: TriMatrix) -> bool:
    M1, Md = tm.factor_U1_Ud(M)
    if not (M1.in_U1 and Md.in_Ud and tm.multiply(M1, Md) == M):
        return False
    # uniqueness: refactoring the pieces gives the pieces back
    return tm.factor_U1_Ud(M1) == (M1, TriMatrix.identity(M.skeleton)) and \
        tm.factor_U1_Ud(Md) == (TriMatrix.identity(M.skeleton), Md)


def u1_normal(P: TriMatrix, N: TriMatrix) -> bool:
    return tm.multiply(tm.multiply(P, N), tm.invert(P)).in_U1


def inverse_two_sided(M: TriMatrix) -> bool:
    inv = tm.invert(M)
    one = TriMatrix.identity(M.skeleton)
    return tm.multiply(M, inv) == one and tm.multiply(inv, M) == one


def internal_external_split(sigma: VAut) -> bool:
    internal, external = ad.decompose(sigma)
    one = VAut.identity(sigma.skeleton)
    return (ad.compose(internal, external) == sigma
            and ad.is_internal(internal)
            and external == ad.canonical_lift(external.skel_part)
            and ad.decompose(internal) == (internal, one)
            and ad.decompose(external) == (one, external)
            and ad.decompose(ad.compose(internal, external)) == (internal, external))


def internal_normal(sigma: VAut, iota: VAut) -> bool:
    return ad.is_internal(ad.compose(ad.compose(sigma, iota), ad.invert(sigma)))


def section_property(t: SkeletonAut) -> bool:
    return ad.induced_skeleton_aut(ad.canonical_lift(t)) == t


def lift_homomorphism(s: SkeletonAut, t: SkeletonAut) -> bool:
    return ad.canonical_lift(compose_skeleton_auts(s, t)) == \
        ad.compose(ad.canonical_lift(s), ad.canonical_lift(t))


def phi_homomorphism(s1: VAut, s2: VAut) -> bool:
    return ad.induced_skeleton_aut(ad.compose(s1, s2)) == compose_skeleton_auts(
        ad.induced_skeleton_aut(s1), ad.induced_skeleton_aut(s2))


def compose_is_sequential(s1: VAut, s2: VAut, a: HahnElement) -> bool:
    return ad.compose(s1, s2)(a) == s1(s2(a))


def invert_is_inverse(sigma: VAut, a: HahnElement) -> bool:
    inv = ad.invert(sigma)
    one = VAut.identity(sigma.skeleton)
    return inv(sigma(a)) == a and ad.compose(sigma, inv) == one == ad.compose(inv, sigma)


def convex_image(sigma: VAut, g: HahnElement, xs: tuple) -> bool:
    """``x in C_g  <=>  sigma(x) in C_sigma(g)`` for every sample ``x``."""
    vg, vsg = valuation(g), valuation(sigma(g))
    return all(in_convex_subgroup(x, vg) == in_convex_subgroup(sigma(x), vsg)
               for x in xs)


def valuation_equivariant(sigma: VAut, a: HahnElement) -> bool:
    if not a:
        return not sigma(a)
    return valuation(sigma(a)) == ad.induced_chain_aut(sigma)(valuation(a))


def aut_order_preserving(sigma: VAut, a: HahnElement, b: HahnElement) -> bool:
    if not ad.is_order_preserving_aut(sigma):
        return False
    if a < b:
        return sigma(a) < sigma(b)
    if b < a:
        return sigma(b) < sigma(a)
    return sigma(a) == sigma(b)


def semidirect_factorization(sigma: VAut) -> bool:
    unitri, diag, shift = ad.semidirect_factors(sigma)
    return (ad.compose(unitri, ad.compose(diag, shift)) == sigma
            and ad.is_internal(unitri)
            and diag.correction.in_U1 and diag.skel_part.shift == 0
            and shift.correction.in_U1
            and shift.skel_part == SkeletonAut(sigma.skeleton, sigma.skel_part.shift))


def family_subgroup(F: GroupFamily, a: HahnElement, b: HahnElement) -> bool:
    if not (rayner_contains(F, a) and rayner_contains(F, b)):
        return True
    return rayner_contains(F, a + b) and rayner_contains(F, -a)


def convex_round_trip(sigma: VAut) -> bool:
    return ad.lift_from_convex_family(ad.convex_family_of(sigma)) == sigma


def lexsum_blockwise(s1: VAut, s2: VAut, a1: HahnElement, a2: HahnElement) -> bool:
    sk1, sk2 = s1.skeleton, s2.skeleton
    sigma = ad.lex_sum_lift(s1, s2)
    whole = lex_embed(a1, sk1, sk2, 1) + lex_embed(a2, sk1, sk2, 2)
    blocks = lex_embed(s1(a1), sk1, sk2, 1) + lex_embed(s2(a2), sk1, sk2, 2)
    return sigma(whole) == blocks


def lexsum_decompose_commutes(s1: VAut, s2: VAut) -> bool:
    i1, e1 = ad.decompose(s1)
    i2, e2 = ad.decompose(s2)
    return ad.decompose(ad.lex_sum_lift(s1, s2)) == \
        (ad.lex_sum_lift(i1, i2), ad.lex_sum_lift(e1, e2))


def json_round_trip(obj: Any) -> bool:
    sk = getattr(obj, "skeleton", None)
    if isinstance(obj, Skeleton):
        return ser.skeleton_from_json(ser.skeleton_to_json(obj)) == obj
    encode, decode = _CODECS[type(obj)]
    return decode(encode(obj), sk) == obj


_CODECS = {
    SkeletonAut: (ser.skeleton_aut_to_json, ser.skeleton_aut_from_json),
    HahnElement: (ser.element_to_json, ser.element_from_json),
    TriMatrix: (ser.trimatrix_to_json, ser.trimatrix_from_json),
    VAut: (ser.vaut_to_json, ser.vaut_from_json),
    GroupFamily: (ser.family_to_json, ser.family_from_json),
}


def text_round_trip(a: HahnElement) -> bool:
    return ser.parse_element(ser.format_element(a), a.skeleton) == a


# ---------------------------------------------------------------------------
# drawers


def _pair(g: Generator):
    sk = g.skeleton()
    return g.element(sk), g.element(sk)


def _triple(g: Generator):
    sk = g.skeleton()
    return g.element(sk), g.element(sk), g.element(sk)


def _elem_matrix(cls: str):
    def draw(g: Generator):
        sk = g.skeleton()
        return g.element(sk), g.trimatrix(sk, cls)
    return draw


def _end_ring(g: Generator):
    sk = g.skeleton()
    cls = g.rng.choice(("Delta", "T", "U1"))
    return g.element(sk), g.trimatrix(sk, cls), g.trimatrix(sk, cls)


def _additive(g: Generator):
    sk = g.skeleton()
    return g.element(sk), g.element(sk), g.trimatrix(sk, "Delta")


def _positive_under_T(g: Generator):
    sk = g.skeleton()
    return g.trimatrix(sk, "T"), g.positive_element(sk)


def _u_matrix(g: Generator):
    return (g.trimatrix(g.skeleton(), "U"),)


def _normality(g: Generator):
    sk = g.skeleton()
    return g.trimatrix(sk, "U"), g.trimatrix(sk, "U1")


def _vaut(g: Generator):
    return (g.vaut(g.skeleton()),)


def _internal_pair(g: Generator):
    sk = g.skeleton()
    return g.vaut(sk), VAut(g.trimatrix(sk, "U1"), SkeletonAut.identity(sk))


def _skel_aut(g: Generator):
    return (g.skeleton_aut(g.skeleton()),)


def _skel_aut_pair(g: Generator):
    sk = g.skeleton()
    return g.skeleton_aut(sk), g.skeleton_aut(sk)


def _vaut_pair(g: Generator):
    sk = g.skeleton()
    return g.vaut(sk), g.vaut(sk)


def _vaut_pair_elem(g: Generator):
    sk = g.skeleton()
    return g.vaut(sk), g.vaut(sk), g.element(sk)


def _vaut_elem(g: Generator):
    sk = g.skeleton()
    return g.vaut(sk), g.element(sk)


def _vaut_two_elems(g: Generator):
    sk = g.skeleton()
    return g.vaut(sk), g.element(sk), g.element(sk)


def _convex(samples: int):
    def draw(g: Generator):
        sk = g.skeleton()
        return g.vaut(sk), g.element(sk, nonzero=True), \
            tuple(g.element(sk) for _ in range(samples))
    return draw


def _finite_vaut_fixing_chain(g: Generator):
    return (g.vaut(g.finite_skeleton()),)


def _lexsum(g: Generator):
    sk1, sk2 = g.finite_skeleton(), g.finite_skeleton()
    return g.vaut(sk1), g.vaut(sk2), g.element(sk1), g.element(sk2)


def _lexsum_pair(g: Generator):
    return g.vaut(g.finite_skeleton()), g.vaut(g.finite_skeleton())


def _family_pair(g: Generator):
    sk = g.skeleton()
    return g.family(sk), g.element(sk), g.element(sk)


def _any_object(g: Generator):
    sk = g.skeleton()
    return (g.rng.choice((lambda: sk, lambda: g.skeleton_aut(sk), lambda: g.element(sk),
                          lambda: g.trimatrix(sk, g.rng.choice(("Delta", "U"))),
                          lambda: g.vaut(sk), lambda: g.family(sk)))(),)


def _element(g: Generator):
    return (g.element(g.skeleton()),)


PROPERTIES: list[Property] = [
    Property("ultrametric", _pair, ultrametric),
    Property("negation_symmetry", _element, negation_symmetry),
    Property("lex_total_order", _pair, total_order),
    Property("lex_translation_invariance", _triple, translation_invariant),
    Property("lex_positive_iff_leading_positive", _element, positive_leading),
    Property("apply_matches_oracle", _elem_matrix("Delta"), apply_matches_oracle),
    Property("end_ring_product", _end_ring, end_ring_product),
    Property("apply_additive", _additive, apply_additive),
    Property("order_preserving_matrix", _positive_under_T, order_preserving_matrix),
    Property("factor_u1_ud", _u_matrix, factor_round_trip),
    Property("u1_normal_in_u", _normality, u1_normal),
    Property("triangular_inverse", _u_matrix, inverse_two_sided),
    Property("internal_external_split", _vaut, internal_external_split),
    Property("internal_subgroup_normal", _internal_pair, internal_normal),
    Property("section_property", _skel_aut, section_property),
    Property("canonical_lift_homomorphism", _skel_aut_pair, lift_homomorphism),
    Property("induced_skeleton_aut_homomorphism", _vaut_pair, phi_homomorphism),
    Property("compose_is_sequential", _vaut_pair_elem, compose_is_sequential),
    Property("invert_is_inverse", _vaut_elem, invert_is_inverse),
    Property("convex_subgroup_image", _convex(20), convex_image),
    Property("valuation_equivariance", _vaut_elem, valuation_equivariant),
    Property("automorphism_order_preserving", _vaut_two_elems, aut_order_preserving),
    Property("semidirect_factorization", _vaut, semidirect_factorization),
    Property("family_subgroup", _family_pair, family_subgroup),
    Property("convex_family_round_trip", _finite_vaut_fixing_chain, convex_round_trip),
    Property("lexsum_blockwise", _lexsum, lexsum_blockwise),
    Property("lexsum_decompose_commutes", _lexsum_pair, lexsum_decompose_commutes),
    Property("json_round_trip", _any_object, json_round_trip),
    Property("element_text_round_trip", _element, text_round_trip),
]


# ---------------------------------------------------------------------------
# running and shrinking


def _fails(prop: Property, case: tuple) -> tuple[bool, Optional[str]]:
    try:
        return (not prop.check(*case)), None
    except Exception as exc:  # a crash is a failure too
        return True, f"{type(exc).__name__}: {exc}"


def _shrinks(obj: Any) -> Iterator[Any]:
    if isinstance(obj, HahnElement):
        for g in obj.support:
            yield HahnElement(obj.skeleton,
                              {h: c for h, c in obj.coeffs.items() if h != g})
    elif isinstance(obj, TriMatrix):
        full = dict(((g, g), q) for g, q in obj.diag_items())
        full.update(obj.offdiag_items())
        for key in list(full):
            smaller = {k: v for k, v in full.items() if k != key}
            yield TriMatrix(obj.skeleton, smaller, obj.default_diag)
    elif isinstance(obj, SkeletonAut):
        for g, _ in obj.exceptions:
            yield SkeletonAut(obj.skeleton, obj.shift, obj.default,
                              {h: q for h, q in obj.exceptions if h != g})
        if obj.default != 1:
            yield SkeletonAut(obj.skeleton, obj.shift, 1, dict(obj.exceptions))
        if obj.shift:
            yield SkeletonAut(obj.skeleton, 0, obj.default, dict(obj.exceptions))
    elif isinstance(obj, VAut):
        for M in _shrinks(obj.correction):
            if M.in_T:
                yield VAut(M, obj.skel_part)
        for t in _shrinks(obj.skel_part):
            yield VAut(obj.correction, t)
    elif isinstance(obj, tuple):
        for i, item in enumerate(obj):
            for smaller in _shrinks(item):
                yield obj[:i] + (smaller,) + obj[i + 1:]


def shrink(prop: Property, case: tuple, max_steps: int = 200) -> tuple:
    """Greedy minimisation: keep any single simplification that still fails."""
    for _ in range(max_steps):
        for i, item in enumerate(case):
            for smaller in _shrinks(item):
                candidate = case[:i] + (smaller,) + case[i + 1:]
                if _fails(prop, candidate)[0]:
                    case = candidate
                    break
            else:
                continue
            break
        else:
            return case
    return case


def run_property(prop: Property, gen: Generator, cases: int) -> Optional[Failure]:
    for _ in range(cases):
        case = prop.draw(gen.split())
        failed, err = _fails(prop, case)
        if failed:
            small = shrink(prop, case)
            return Failure(prop.name, small, _fails(prop, small)[1] or err)
    return None


@dataclass
class SuiteResult:
    name: str
    cases: int
    seconds: float
    failure: Optional[Failure] = None

    @property
    def passed(self) -> bool:
        return self.failure is None


def run_all(cfg: GenConfig, cases: int, properties=None,
            stop_on_failure: bool = True) -> list[SuiteResult]:
    gen = Generator(cfg)
    results = []
    for prop in properties or PROPERTIES:
        start = time.perf_counter()
        failure = run_property(prop, gen, cases)
        results.append(SuiteResult(prop.name, cases, time.perf_counter() - start, failure))
        if failure and stop_on_failure:
            break
    return results


# ---------------------------------------------------------------------------
# reporting


def describe(obj: Any) -> Any:
    """JSON-friendly description of any object a property can receive."""
    if isinstance(obj, Skeleton):
        return {"skeleton": ser.skeleton_to_json(obj)}
    if isinstance(obj, tuple):
        return [describe(x) for x in obj]
    for cls, (encode, _) in _CODECS.items():
        if isinstance(obj, cls):
            return {"type": cls.__name__,
                    "skeleton": ser.skeleton_to_json(obj.skeleton),
                    "value": encode(obj)}
    return repr(obj)
