"""JSON encodings and the element text syntax.

Rationals are always strings (``"3/2"``, ``"-4"``); JSON numbers are only
used for positions, shifts and sizes.  Objects other than skeletons are
encoded without their skeleton, so decoding takes the skeleton as context.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any

from .autdecomp import ConvexFamily, VAut
from .element import HahnElement
from .errors import ParseError
from .rayner import Descriptor, GroupFamily
from .skeleton import (
    FiniteChain,
    IntegerChain,
    Skeleton,
    SkeletonAut,
    as_rational,
)
from .trimatrix import TriMatrix


def _rat(value: Any, what: str) -> Fraction:
    if not isinstance(value, str):
        raise ParseError(f"{what} must be a rational string like \"p/q\", got {value!r}")
    return as_rational(value)


def _int(value: Any, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParseError(f"{what} must be an integer, got {value!r}")
    return value


def _obj(value: Any, what: str) -> dict:
    if not isinstance(value, dict):
        raise ParseError(f"{what} must be a JSON object")
    return value


def _list(value: Any, what: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{what} must be a JSON array")
    return value


def _get(d: dict, key: str, what: str):
    try:
        return d[key]
    except KeyError:
        raise ParseError(f"{what} is missing key {key!r}") from None


def fmt_rational(q: Fraction) -> str:
    return str(q)


# -- skeleton -----------------------------------------------------------------

def skeleton_to_json(sk: Skeleton) -> dict:
    tags = [str(t) for t in sk.tags]
    if sk.is_finite:
        return {"chain": {"kind": "finite", "n": sk.chain.n}, "tags": tags}
    return {"chain": {"kind": "integers"}, "tags": tags, "period": len(tags)}


def skeleton_from_json(data: Any) -> Skeleton:
    data = _obj(data, "skeleton")
    chain = _obj(_get(data, "chain", "skeleton"), "chain")
    tags = _list(_get(data, "tags", "skeleton"), "tags")
    kind = _get(chain, "kind", "chain")
    if kind == "finite":
        return Skeleton(FiniteChain(_int(_get(chain, "n", "chain"), "n")), tuple(tags))
    if kind == "integers":
        if "period" in data and _int(data["period"], "period") != len(tags):
            raise ParseError(f"period {data['period']} does not match {len(tags)} tags")
        return Skeleton(IntegerChain(), tuple(tags))
    raise ParseError(f"unknown chain kind {kind!r}")


# -- skeleton automorphism ----------------------------------------------------

def skeleton_aut_to_json(t: SkeletonAut) -> dict:
    return {"shift": t.shift, "default_iso": fmt_rational(t.default),
            "exceptions": [{"pos": g, "q": fmt_rational(q)} for g, q in t.exceptions]}


def skeleton_aut_from_json(data: Any, sk: Skeleton) -> SkeletonAut:
    data = _obj(data, "skeleton automorphism")
    exc: dict[int, Fraction] = {}
    for item in _list(data.get("exceptions", []), "exceptions"):
        item = _obj(item, "exception")
        pos = _int(_get(item, "pos", "exception"), "pos")
        if pos in exc:
            raise ParseError(f"duplicate exception at position {pos}")
        exc[pos] = _rat(_get(item, "q", "exception"), "q")
    return SkeletonAut(sk, _int(data.get("shift", 0), "shift"),
                       _rat(data.get("default_iso", "1"), "default_iso"), exc)


# -- elements ---------------------------------------------------------------

def element_to_json(a: HahnElement) -> dict:
    return {"terms": [{"pos": g, "coeff": fmt_rational(c)} for g, c in a.terms()]}


def element_from_json(data: Any, sk: Skeleton) -> HahnElement:
    data = _obj(data, "element")
    coeffs: dict[int, Fraction] = {}
    for item in _list(_get(data, "terms", "element"), "terms"):
        item = _obj(item, "term")
        pos = _int(_get(item, "pos", "term"), "pos")
        c = _rat(_get(item, "coeff", "term"), "coeff")
        _add_term(coeffs, pos, c)
    return HahnElement(sk, coeffs)


def _add_term(coeffs: dict, pos: int, c: Fraction) -> None:
    if pos in coeffs:
        raise ParseError(f"duplicate position {pos}")
    if not c:
        raise ParseError(f"zero coefficient at position {pos}")
    coeffs[pos] = c


_TERM_RE = re.compile(r"^\s*([+-]?\d+(?:\s*/\s*\d+)?)\s*\*\s*1\s*@\s*([+-]?\d+)\s*$")


def format_element(a: HahnElement) -> str:
    """``3/2*1@0 + -1*1@2``; the zero element is ``0``."""
    return " + ".join(f"{c}*1@{g}" for g, c in a.terms()) or "0"


def parse_element(text: str, sk: Skeleton) -> HahnElement:
    if text.strip() == "0":
        return HahnElement.zero(sk)
    coeffs: dict[int, Fraction] = {}
    for term in text.split("+"):
        m = _TERM_RE.match(term)
        if not m:
            raise ParseError(f"cannot parse term {term.strip()!r} (expected 'p/q*1@pos')")
        _add_term(coeffs, int(m.group(2)), as_rational(m.group(1).replace(" ", "")))
    return HahnElement(sk, coeffs)


# -- matrices ---------------------------------------------------------------

def trimatrix_to_json(M: TriMatrix, offset: int = 0) -> dict:
    entries = [{"row": g + offset, "col": g + offset, "q": fmt_rational(q)}
               for g, q in M.diag_items()]
    entries += [{"row": r + offset, "col": c + offset, "q": fmt_rational(q)}
                for (r, c), q in M.offdiag_items()]
    entries.sort(key=lambda e: (e["row"], e["col"]))
    return {"default_diag": fmt_rational(M.default_diag), "entries": entries}


def trimatrix_from_json(data: Any, sk: Skeleton, offset: int = 0) -> TriMatrix:
    data = _obj(data, "matrix")
    entries: dict = {}
    for item in _list(data.get("entries", []), "entries"):
        item = _obj(item, "entry")
        row = _int(_get(item, "row", "entry"), "row") - offset
        col = _int(_get(item, "col", "entry"), "col") - offset
        if (row, col) in entries:
            raise ParseError(f"duplicate entry ({row + offset},{col + offset})")
        entries[row, col] = _rat(_get(item, "q", "entry"), "q")
    return TriMatrix(sk, entries, _rat(data.get("default_diag", "1"), "default_diag"))


# -- automorphisms ------------------------------------------------------------

def vaut_to_json(sigma: VAut) -> dict:
    return {"correction": trimatrix_to_json(sigma.correction),
            "skel_part": skeleton_aut_to_json(sigma.skel_part)}


def vaut_from_json(data: Any, sk: Skeleton) -> VAut:
    data = _obj(data, "automorphism")
    return VAut(trimatrix_from_json(data.get("correction", {}), sk),
                skeleton_aut_from_json(data.get("skel_part", {}), sk))


def convex_family_to_json(F: ConvexFamily) -> dict:
    """Blocks are written in the coordinates of the whole chain."""
    return {"blocks": [{"pos": g, "matrix": trimatrix_to_json(F.blocks[g], offset=g)}
                       for g in sorted(F.blocks)]}


def convex_family_from_json(data: Any, sk: Skeleton) -> ConvexFamily:
    data = _obj(data, "convex family")
    blocks: dict[int, TriMatrix] = {}
    for item in _list(_get(data, "blocks", "convex family"), "blocks"):
        item = _obj(item, "block")
        g = _int(_get(item, "pos", "block"), "pos")
        if g in blocks:
            raise ParseError(f"duplicate block at position {g}")
        blocks[g] = trimatrix_from_json(_get(item, "matrix", "block"), sk.tail(g), offset=g)
    return ConvexFamily(sk, blocks)


# -- group families ---------------------------------------------------------

def family_to_json(F: GroupFamily) -> dict:
    out: dict[str, Any] = {"descriptor": F.descriptor.value,
                           "sets": [sorted(s) for s in F.sorted_sets()],
                           "bound": F.bound}
    if F.period is not None:
        out["period"] = F.period
        out["residues"] = sorted(F.residues)
    return out


def raw_family_sets(data: Any) -> list[list[int]]:
    data = _obj(data, "family")
    sets = []
    for s in _list(data.get("sets", []), "sets"):
        sets.append([_int(g, "set element") for g in _list(s, "set")])
    return sets


def family_from_json(data: Any, sk: Skeleton) -> GroupFamily:
    data = _obj(data, "family")
    try:
        descriptor = Descriptor(_get(data, "descriptor", "family"))
    except ValueError:
        raise ParseError(f"unknown family descriptor {data.get('descriptor')!r}") from None
    if descriptor is Descriptor.EXPLICIT:
        return GroupFamily.explicit(sk, raw_family_sets(data))
    if descriptor is Descriptor.ALL_FINITE:
        return GroupFamily.all_finite(sk)
    bound = data.get("bound")
    period = data.get("period")
    return GroupFamily.finite_within(
        sk,
        bound=None if bound is None else _int(bound, "bound"),
        period=None if period is None else _int(period, "period"),
        residues=[_int(r, "residue") for r in _list(data.get("residues", []), "residues")])
