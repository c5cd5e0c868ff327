"""Batch command line front end.

Every verb reads JSON objects (a file path or an inline JSON literal), runs
one library operation and writes a JSON result.  Exit status: 0 success,
1 selftest failure, 2 malformed input, 3 domain error, 4 internal bug.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from . import autdecomp as ad
from . import rayner
from . import serialize as ser
from .element import (
    HahnElement,
    in_convex_subgroup,
    leading_coefficient,
    lex_compare,
    sign,
    valuation,
)
from .errors import HahnError, ParseError
from .skeleton import Skeleton
from .testkit.generators import GenConfig
from .testkit.suites import run_all

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_DOMAIN, EXIT_INTERNAL = 0, 1, 2, 3, 4

EVAL_OPS = ("valuation", "sign", "leading", "support", "negate", "add", "compare",
            "in-convex", "format")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


# -- input helpers ------------------------------------------------------------

def load(arg: str) -> Any:
    """A path to a JSON file, or an inline JSON literal."""
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        try:
            text = Path(arg).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {arg!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {arg!r}: {exc.msg}", line=exc.lineno) from None


def _skeleton(args, *docs) -> Skeleton:
    """From ``--skeleton``, or else from a ``"skeleton"`` key in an input."""
    if getattr(args, "skeleton", None):
        return ser.skeleton_from_json(load(args.skeleton))
    for doc in docs:
        if isinstance(doc, dict) and "skeleton" in doc:
            return ser.skeleton_from_json(doc["skeleton"])
    raise ParseError("no skeleton given (use --skeleton)")


def _element(text: str, sk: Skeleton) -> HahnElement:
    stripped = text.lstrip()
    if stripped.startswith("{") or text.endswith(".json"):
        return ser.element_from_json(load(text), sk)
    return ser.parse_element(text, sk)


def _elem_out(a: HahnElement) -> dict:
    out = ser.element_to_json(a)
    out["text"] = ser.format_element(a)
    return out


def _val(v) -> Any:
    return None if v == float("inf") else v


def _vaut(arg: str, sk: Optional[Skeleton] = None, args=None):
    doc = load(arg)
    sk = sk or _skeleton(args, doc)
    return ser.vaut_from_json(doc, sk), sk


# -- verbs ----------------------------------------------------------------

def cmd_eval(args) -> dict:
    sk = _skeleton(args)
    a = _element(args.expr, sk)
    op = args.op
    if op == "valuation":
        return {"valuation": _val(valuation(a))}
    if op == "sign":
        return {"sign": sign(a)}
    if op == "leading":
        return {"leading_coefficient": ser.fmt_rational(leading_coefficient(a))}
    if op == "support":
        return {"support": sorted(a.support)}
    if op == "negate":
        return {"result": _elem_out(-a)}
    if op == "format":
        return {"result": _elem_out(a)}
    if op == "in-convex":
        if args.pos is None:
            raise ParseError("--op in-convex needs --pos")
        return {"member": in_convex_subgroup(a, args.pos)}
    if args.expr2 is None:
        raise ParseError(f"--op {op} needs --expr2")
    b = _element(args.expr2, sk)
    if op == "add":
        return {"result": _elem_out(a + b)}
    return {"compare": int(lex_compare(a, b))}


def cmd_apply(args) -> dict:
    sigma, sk = _vaut(args.aut, args=args)
    return {"result": _elem_out(sigma(_element(args.expr, sk)))}


def cmd_compose(args) -> dict:
    s1, sk = _vaut(args.first, args=args)
    s2, _ = _vaut(args.second, sk)
    return {"result": ser.vaut_to_json(ad.compose(s1, s2))}


def cmd_invert(args) -> dict:
    sigma, _ = _vaut(args.aut, args=args)
    return {"result": ser.vaut_to_json(ad.invert(sigma))}


def cmd_decompose(args) -> dict:
    sigma, _ = _vaut(args.aut, args=args)
    internal, external = ad.decompose(sigma)
    recomposes = ad.compose(internal, external) == sigma
    if not recomposes:
        raise AssertionError("decomposition does not recompose")
    out = {"internal": ser.vaut_to_json(internal),
           "external": ser.vaut_to_json(external),
           "induced": ser.skeleton_aut_to_json(ad.induced_skeleton_aut(sigma)),
           "recomposes": recomposes}
    if args.factors:
        u, d, s = ad.semidirect_factors(sigma)
        out["factors"] = {"unitriangular": ser.vaut_to_json(u),
                          "diagonal": ser.vaut_to_json(d),
                          "shift": ser.vaut_to_json(s)}
    return out


def cmd_lift(args) -> dict:
    doc = load(args.aut)
    sk = _skeleton(args, doc)
    t = ser.skeleton_aut_from_json(doc, sk)
    return {"result": ser.vaut_to_json(ad.canonical_lift(t))}


def cmd_convex_lift(args) -> dict:
    doc = load(args.family)
    sk = _skeleton(args, doc)
    sigma = ad.lift_from_convex_family(ser.convex_family_from_json(doc, sk))
    return {"result": ser.vaut_to_json(sigma)}


def cmd_lexsum(args) -> dict:
    d1, d2 = load(args.first), load(args.second)
    sk1 = ser.skeleton_from_json(load(args.skeleton1)) if args.skeleton1 else _skeleton(None, d1)
    sk2 = ser.skeleton_from_json(load(args.skeleton2)) if args.skeleton2 else _skeleton(None, d2)
    sigma = ad.lex_sum_lift(ser.vaut_from_json(d1, sk1), ser.vaut_from_json(d2, sk2))
    return {"skeleton": ser.skeleton_to_json(sigma.skeleton),
            "result": ser.vaut_to_json(sigma)}


def _stability(F: rayner.GroupFamily, t) -> dict:
    witness = rayner.setwise_witness(F, t)
    lift_witness = rayner.canonical_lift_witness(F, t)
    pointwise = rayner.pointwise_witness(F, t)
    out = {"setwise": witness is None,
           "pointwise": pointwise is None,
           "canonical_lift_closed": lift_witness is None}
    if witness is not None:
        out["witness"] = sorted(witness)
    if lift_witness is not None:
        out["lift_witness"] = sorted(lift_witness)
    if pointwise is not None:
        out["pointwise_witness"] = sorted(pointwise)
    return out


def cmd_family_check(args) -> dict:
    doc = load(args.family)
    sk = _skeleton(args, doc)
    out: dict[str, Any] = {}
    if doc.get("descriptor", "explicit") == "explicit":
        ok, violation = rayner.is_group_family(sk, ser.raw_family_sets(doc))
        out["is_group_family"] = ok
        if violation is not None:
            out["violation"] = {"condition": violation.condition,
                                "missing": sorted(violation.missing)}
            return out
    else:
        out["is_group_family"] = True
    if args.aut:
        F = ser.family_from_json(doc, sk)
        out.update(_stability(F, ser.skeleton_aut_from_json(load(args.aut), sk)))
    return out


def cmd_family_stable(args) -> dict:
    doc = load(args.family)
    sk = _skeleton(args, doc)
    F = ser.family_from_json(doc, sk)
    return _stability(F, ser.skeleton_aut_from_json(load(args.aut), sk))


def cmd_family_closure(args) -> dict:
    doc = load(args.sets)
    sk = _skeleton(args, doc)
    gens = ser.raw_family_sets(doc if isinstance(doc, dict) else {"sets": doc})
    return {"family": ser.family_to_json(rayner.family_from_generators(sk, gens))}


def cmd_selftest(args) -> tuple[dict, int]:
    try:
        cfg = GenConfig(seed=args.seed, max_chain=args.max_chain)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    results = run_all(cfg, args.cases)
    body = {"seed": args.seed, "cases": args.cases,
            "results": [{"property": r.name, "passed": r.passed,
                         "seconds": round(r.seconds, 3)} for r in results]}
    failed = [r for r in results if not r.passed]
    body["passed"] = not failed
    if failed:
        body["failure"] = failed[0].failure.to_json()
        return body, EXIT_FAILED
    return body, EXIT_OK


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hahn", description="Exact computations in Hahn groups.")
    p.add_argument("--output", "-o", help="write the JSON result here")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, func, help_):
        q = sub.add_parser(name, help=help_)
        q.set_defaults(func=func)
        return q

    q = verb("eval", cmd_eval, "evaluate an operation on an element")
    q.add_argument("--skeleton", required=True)
    q.add_argument("--expr", required=True, help="element text or element JSON")
    q.add_argument("--expr2")
    q.add_argument("--op", choices=EVAL_OPS, default="format")
    q.add_argument("--pos", type=int)

    q = verb("apply", cmd_apply, "apply an automorphism to an element")
    q.add_argument("--skeleton")
    q.add_argument("--aut", required=True)
    q.add_argument("--expr", required=True)

    q = verb("compose", cmd_compose, "compose two automorphisms (first after second)")
    q.add_argument("--skeleton")
    q.add_argument("first")
    q.add_argument("second")

    for name, func, help_ in (("invert", cmd_invert, "invert an automorphism"),
                              ("decompose", cmd_decompose,
                               "split into internal and external factors"),
                              ("lift", cmd_lift,
                               "canonical lift of a skeleton automorphism")):
        q = verb(name, func, help_)
        q.add_argument("--skeleton")
        q.add_argument("--aut", required=True)
        if name == "decompose":
            q.add_argument("--factors", action="store_true",
                           help="also give unitriangular, diagonal and shift factors")

    q = verb("convex-lift", cmd_convex_lift, "assemble an automorphism from convex blocks")
    q.add_argument("--skeleton")
    q.add_argument("--family", required=True)

    q = verb("lexsum", cmd_lexsum, "automorphism of a lexicographic sum")
    q.add_argument("--skeleton1")
    q.add_argument("--skeleton2")
    q.add_argument("first")
    q.add_argument("second")

    q = verb("family", None, "group families of supports")
    fam = q.add_subparsers(dest="subverb", required=True, parser_class=_Parser)
    f = fam.add_parser("check", help="closure violations and stability witnesses")
    f.set_defaults(func=cmd_family_check)
    f.add_argument("--skeleton")
    f.add_argument("--family", required=True)
    f.add_argument("--aut")
    f = fam.add_parser("stable", help="stability under a skeleton automorphism")
    f.set_defaults(func=cmd_family_stable)
    f.add_argument("--skeleton")
    f.add_argument("--family", required=True)
    f.add_argument("--aut", required=True)
    f = fam.add_parser("closure", help="smallest family containing the given sets")
    f.set_defaults(func=cmd_family_closure)
    f.add_argument("--skeleton")
    f.add_argument("--sets", required=True)

    q = verb("selftest", cmd_selftest, "run every randomized property")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--cases", type=int, default=100)
    q.add_argument("--max-chain", type=int, default=6)
    return p


def _execute(argv) -> tuple[int, dict, Optional[str]]:
    output = None
    try:
        args = build_parser().parse_args(argv)
        output = args.output
        out = args.func(args)
        status = EXIT_OK
        if isinstance(out, tuple):
            out, status = out
        return status, out, output
    except ParseError as exc:
        return EXIT_PARSE, exc.to_json(), output
    except HahnError as exc:
        return EXIT_DOMAIN, exc.to_json(), output
    except Exception as exc:
        return EXIT_INTERNAL, {"error": "InternalBug",
                               "detail": {"message": f"{type(exc).__name__}: {exc}"}}, output


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, dict]:
    """Execute one command; returns the exit status and the JSON body."""
    status, body, _ = _execute(argv)
    return status, body


def main(argv: Optional[Sequence[str]] = None) -> int:
    status, body, output = _execute(sys.argv[1:] if argv is None else list(argv))
    text = json.dumps(body, indent=2)
    if output and status in (EXIT_OK, EXIT_FAILED):
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text, file=sys.stdout if status in (EXIT_OK, EXIT_FAILED) else sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
