"""Batch command-line front end.

Every command maps one-to-one onto a library operation and prints a
single JSON document with sorted keys, so identical inputs and flags
produce byte-identical output.  Exit codes: 0 success, 1 domain error
(reported as JSON on stderr), 2 usage error.

SHAPELY_THREADS is accepted for compatibility with parallel builds of
the library; this implementation is single-threaded and only validates
the value.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .canon import canonical_form, label_preserving_automorphisms
from .cellular import NoExtension, minimal_extension
from .functors import (KINDS, evaluate, free_monad, sigma_polycat, sigma_prop,
                       sigma_properad, spectrum, universal_spectrum)
from .freestruct import check_axioms, free_structure
from .polygraph import MODES, PLANAR, PolyMorphism
from .shapes import PROP, PROPERAD, TREE, enumerate_shapes
from .workspace import (ParseError, evaluation_to_dict, free_structure_to_dict,
                        functor_to_dict, morphism_to_dict, parse_file,
                        shape_to_dict, spectrum_to_dict)

_SIGMA = {"polycat": sigma_polycat, "properad": sigma_properad,
          "prop": sigma_prop}


class DomainError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _emit(doc: dict) -> int:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0


def _load(path: str):
    try:
        return parse_file(path)
    except FileNotFoundError:
        raise DomainError("no-such-file", f"cannot read {path!r}")
    except ParseError as exc:
        raise DomainError("parse-error", str(exc))


def _pick(table: dict, name: str | None, what: str, path: str):
    if name is not None:
        if name not in table:
            raise DomainError("no-such-name",
                              f"no {what} named {name!r} in {path!r}")
        return table[name]
    if len(table) == 1:
        return next(iter(table.values()))
    raise DomainError(
        "ambiguous-name",
        f"{path!r} holds {len(table)} {what}s; pick one with a flag")


def _functor_arg(args):
    """A functor from --kind (free monad on a signature) or --functor."""
    if args.kind is not None:
        sig = _SIGMA[args.kind]((args.max_edges, args.max_arity), args.mode)
        return free_monad(sig)
    if args.functor is None or args.input is None:
        raise DomainError("missing-functor",
                          "pass either --kind or --input with --functor")
    w = _load(args.input)
    if args.functor not in w.functors:
        raise DomainError("no-such-name",
                          f"no functor named {args.functor!r}")
    return w.functors[args.functor]


def _vertex_map(pairs, dom, cod, flag):
    vmap = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise DomainError("bad-map", f"{flag} wants <vertex>=<vertex>")
        a, b = pair.split("=", 1)
        vmap[a] = b
    missing = [v for v in dom.vertices if v not in vmap]
    if missing:
        raise DomainError("bad-map", f"{flag} misses vertices {missing}")
    bad = [w for w in vmap.values() if w not in cod.vertex_set]
    if bad:
        raise DomainError("bad-map", f"{flag} hits unknown vertices {bad}")
    return vmap


# ---------------------------------------------------------------------------
# commands


def _cmd_enumerate(args) -> int:
    digests = list(enumerate_shapes(args.shape_class, args.arity[0],
                                    args.arity[1], args.max_edges,
                                    args.mode, args.max_arity))
    return _emit({
        "class": args.shape_class,
        "arity": list(args.arity),
        "max_edges": args.max_edges,
        "max_arity": args.max_arity,
        "mode": args.mode,
        "count": len(digests),
        "digests": digests,
    })


def _cmd_free_monad(args) -> int:
    fm = free_monad(_functor_arg(args))
    return _emit(functor_to_dict(fm, include_shapes=not args.digests_only))


def _cmd_apply(args) -> int:
    fm = _functor_arg(args)
    if args.input is None:
        raise DomainError("missing-input", "apply needs --input")
    w = _load(args.input)
    base = _pick(w.polygraphs, args.polygraph, "polygraph", args.input)
    return _emit(evaluation_to_dict(evaluate(fm, base)))


def _cmd_free_structure(args) -> int:
    w = _load(args.input)
    base = _pick(w.polygraphs, args.polygraph, "polygraph", args.input)
    fs = free_structure(args.kind, base,
                        (args.max_edges, args.max_arity), args.mode)
    return _emit(free_structure_to_dict(fs))


def _cmd_check_axioms(args) -> int:
    w = _load(args.input)
    base = _pick(w.polygraphs, args.polygraph, "polygraph", args.input)
    report = check_axioms(args.kind, base, trials=args.trials,
                          seed=args.seed,
                          bounds=(args.max_edges, args.max_arity),
                          mode=args.mode, mutate=args.mutate)
    return _emit(report.to_json_dict())


def _cmd_canon(args) -> int:
    w = _load(args.input)
    x = _pick(w.shapes, args.shape, "shape", args.input)
    cf = canonical_form(x, args.mode)
    group = label_preserving_automorphisms(cf.shape, args.mode)
    return _emit({
        "digest": cf.digest,
        "mode": args.mode,
        "canonical": shape_to_dict(cf.shape),
        "group_order": group.order,
        "group": [morphism_to_dict(g) for g in group.elements],
        "witness": morphism_to_dict(cf.witness),
    })


def _cmd_minext(args) -> int:
    w = _load(args.input)
    if args.domain not in w.polygraphs:
        raise DomainError("no-such-name", f"no polygraph {args.domain!r}")
    if args.codomain not in w.polygraphs:
        raise DomainError("no-such-name", f"no polygraph {args.codomain!r}")
    dom = w.polygraphs[args.domain]
    cod = w.polygraphs[args.codomain]
    if dom.edges:
        raise DomainError("not-discrete",
                          "minext maps are given vertexwise; the domain "
                          "must be a discrete polygraph")
    f = PolyMorphism(dom, cod, _vertex_map(args.map, dom, cod, "--map"),
                     {}, PLANAR)
    sigma = PolyMorphism(dom, dom,
                         _vertex_map(args.sigma, dom, dom, "--sigma"),
                         {}, PLANAR)
    try:
        got = minimal_extension(f, sigma)
    except ValueError as exc:
        raise DomainError("bad-extension-problem", str(exc))
    if isinstance(got, NoExtension):
        return _emit({"no_extension": {
            "reason": got.reason, "edge": got.edge, "role": got.role,
            "position": got.position, "vertex": got.vertex}})
    return _emit({"extension": morphism_to_dict(got)})


def _cmd_spectrum(args) -> int:
    if args.universal:
        sp = universal_spectrum((args.max_edges, args.max_arity), args.mode)
    else:
        sp = spectrum(_functor_arg(args))
    return _emit(spectrum_to_dict(sp))


# ---------------------------------------------------------------------------
# argument plumbing


def _add_mode(p, default=PLANAR):
    p.add_argument("--mode", choices=MODES, default=default)


def _add_bounds(p, edges, arity):
    p.add_argument("--max-edges", type=int, default=edges)
    p.add_argument("--max-arity", type=int, default=arity)


def _add_functor_source(p):
    p.add_argument("--kind", choices=sorted(KINDS))
    p.add_argument("--functor", help="functor name in the --input workspace")
    p.add_argument("--input", help="workspace file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polyshape",
        description="shape enumeration, free monads and free structures "
                    "on polygraphs")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="brute-force a shape class")
    p.add_argument("--class", dest="shape_class", required=True,
                   choices=(TREE, PROPERAD, PROP))
    p.add_argument("--arity", nargs=2, type=int, required=True,
                   metavar=("N", "M"))
    _add_bounds(p, 2, 3)
    _add_mode(p)
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("free-monad", help="substitution closure of a "
                       "signature kind or workspace functor")
    _add_functor_source(p)
    _add_bounds(p, 3, 2)
    _add_mode(p)
    p.add_argument("--digests-only", action="store_true")
    p.set_defaults(fn=_cmd_free_monad)

    p = sub.add_parser("apply", help="evaluate a functor on a polygraph")
    _add_functor_source(p)
    p.add_argument("--polygraph", help="base polygraph name")
    _add_bounds(p, 3, 2)
    _add_mode(p)
    p.set_defaults(fn=_cmd_apply)

    p = sub.add_parser("free-structure", help="hom tables of the free "
                       "structure on a base polygraph")
    p.add_argument("--kind", choices=sorted(KINDS), required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--polygraph")
    _add_bounds(p, 3, 2)
    _add_mode(p)
    p.set_defaults(fn=_cmd_free_structure)

    p = sub.add_parser("check-axioms", help="verify the defining axioms on "
                       "seeded random morphisms")
    p.add_argument("--kind", choices=sorted(KINDS), required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--polygraph")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mutate", action="store_true",
                   help="negative control: omit the derived boundary "
                        "permutations")
    _add_bounds(p, 2, 2)
    _add_mode(p)
    p.set_defaults(fn=_cmd_check_axioms)

    p = sub.add_parser("canon", help="canonical form of a workspace shape")
    p.add_argument("--input", required=True)
    p.add_argument("--shape")
    _add_mode(p)
    p.set_defaults(fn=_cmd_canon)

    p = sub.add_parser("minext", help="extend an automorphism along a mono "
                       "of discrete domain")
    p.add_argument("--input", required=True)
    p.add_argument("--domain", required=True)
    p.add_argument("--codomain", required=True)
    p.add_argument("--map", action="append", metavar="V=W")
    p.add_argument("--sigma", action="append", metavar="V=W")
    p.set_defaults(fn=_cmd_minext)

    p = sub.add_parser("spectrum", help="exponent data of a functor or of "
                       "everything well-labelled within bounds")
    p.add_argument("--universal", action="store_true")
    _add_functor_source(p)
    _add_bounds(p, 2, 2)
    _add_mode(p)
    p.set_defaults(fn=_cmd_spectrum)

    return ap


def main(argv=None) -> int:
    threads = os.environ.get("SHAPELY_THREADS")
    if threads is not None:
        try:
            if int(threads) < 1:
                raise ValueError
        except ValueError:
            sys.stderr.write(json.dumps(
                {"code": "bad-threads",
                 "message": "SHAPELY_THREADS must be a positive integer"})
                + "\n")
            return 2
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except DomainError as exc:
        sys.stderr.write(json.dumps(
            {"code": exc.code, "message": str(exc)}) + "\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(json.dumps(
            {"code": "domain-error", "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
