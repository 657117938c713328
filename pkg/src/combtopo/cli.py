"""Command-line entry point.

Exit codes: 0 success, 1 a check failed, 2 malformed input, 3 a result was
asked for beyond what a truncation can vouch for.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import corpus
from .categories import nerve_chains, nerve_h1_chains
from .coxeter import box_chambers, convexity_check, coxeter_complex, is_downward_closed
from .homology import homology, normalized_chains, reduced_homology, stabilized_homology
from .paths import comb_category, fat_and_reg_subposets, gallery_category, stone_paths, stone_poset
from .sset import ComplexError, SimplicialComplex, SSet, TrustError, from_complex, sset_from_json, sset_to_json
from .subdivision import sd
from .suites import SUITES, run_suite


class InputError(Exception):
    pass


def _read_json(path: str):
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _load_complex(args) -> SimplicialComplex:
    if args.complex:
        return corpus.complex_named(args.complex)
    if not args.input:
        raise InputError("give --complex NAME or --input FILE ('-' for stdin)")
    data = _read_json(args.input)
    if not isinstance(data, dict) or "simplices" not in data:
        raise InputError("expected a complex object with 'vertices' and 'simplices'")
    return SimplicialComplex.from_json(data)


def _load_sset(args) -> tuple[SSet, str]:
    if args.complex:
        return from_complex(corpus.complex_named(args.complex)), args.complex
    if not args.input:
        raise InputError("give --complex NAME or --input FILE ('-' for stdin)")
    data = _read_json(args.input)
    if isinstance(data, dict) and "cells" in data:
        return sset_from_json(data), args.input
    if isinstance(data, dict) and "simplices" in data:
        return from_complex(SimplicialComplex.from_json(data)), args.input
    raise InputError("expected a simplicial set ('cells') or a complex ('simplices')")


def _simplex_arg(text: str | None, default):
    if text is None:
        return default
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"cannot read simplex {text!r}; use comma-separated vertices") from None


def _endpoints(args) -> tuple:
    default = corpus.ENDPOINTS.get(args.complex, (None, None))
    a = _simplex_arg(args.a, default[0])
    b = _simplex_arg(args.b, default[1])
    if a is None or b is None:
        raise InputError("endpoints --a and --b are required for this complex")
    return a, b


def _trust(x: SSet) -> dict:
    return {"cap": x.cap, "exact": x.cap is None}


# ----------------------------------------------------------------------------
# subcommands


def cmd_sset(args) -> tuple[dict, int]:
    x, src = _load_sset(args)
    x.check()
    out = {"source": src, "counts": list(x.counts()), "euler": x.euler_characteristic(), "trust": _trust(x)}
    if args.full:
        out["sset"] = sset_to_json(x)
    return out, 0


def cmd_sd(args) -> tuple[dict, int]:
    x, src = _load_sset(args)
    s = sd(args.r, x)
    out = {"source": src, "r": args.r, "counts": list(s.counts()), "euler": s.euler_characteristic(), "trust": _trust(s)}
    if args.full:
        out["sset"] = sset_to_json(s)
    return out, 0


def cmd_homology(args) -> tuple[dict, int]:
    x, _ = _load_sset(args)
    c = normalized_chains(x, args.k + 1 if x.cap is None else min(args.k + 1, x.cap))
    h = reduced_homology(c, args.k) if args.reduced else homology(c, args.k)
    trusted = None if c.trusted_through == float("inf") else c.trusted_through
    return {**h.to_json(), "degree": args.k, "reduced": args.reduced, "trusted_through": trusted}, 0


def _report_family(build, levels, args) -> dict:
    cache: dict = {}

    def get(level):
        if level not in cache:
            cache[level] = build(level)
        return cache[level]

    rep = stabilized_homology(get, args.homology, args.window, levels, tail=True)
    return rep.to_json()


def _category_chains(cat, k):
    return nerve_h1_chains(cat) if k <= 1 else nerve_chains(cat, k + 1)


def cmd_paths(args) -> tuple[dict, int]:
    k = _load_complex(args)
    a, b = _endpoints(args)
    counts = []
    for level in range(args.level + 1):
        poset = stone_poset(k, a, b, level)
        fat, reg, both = fat_and_reg_subposets(poset, k, fat=not args.no_fat)
        row = {"level": level, "paths": len(poset.objects), "regular": len(reg.objects)}
        if fat is not None:
            row.update(fat=len(fat.objects), fat_regular=len(both.objects))
        counts.append(row)
    out = {"endpoints": [list(a), list(b)], "levels": counts, "trust": {"max_level": args.level}}
    if args.homology is not None:

        def build(level):
            poset = stone_poset(k, a, b, level)
            sub = poset if args.no_fat else fat_and_reg_subposets(poset, k)[0]
            return nerve_chains(sub, args.homology + 1)

        out["homology"] = _report_family(build, list(range(args.level + 1)), args)
    if args.show:
        out["paths"] = [p.to_json(k) for p in stone_paths(k, a, b, args.level)]
    return out, 0


def cmd_galleries(args) -> tuple[dict, int]:
    k = _load_complex(args)
    a, b = _endpoints(args)
    top = gallery_category(k, a, b, args.max_chambers, nonmaximal=args.nonmaximal)
    out = {
        "endpoints": [list(a), list(b)],
        "objects": len(top.objects),
        "morphisms": len(top.morphisms),
        "trust": {"bound": list(top.bound), "nonmaximal": args.nonmaximal},
    }
    if args.homology is not None:
        out["homology"] = _report_family(
            lambda L: _category_chains(gallery_category(k, a, b, L, nonmaximal=args.nonmaximal), args.homology),
            list(range(1, args.max_chambers + 1)),
            args,
        )
    if args.show:
        out["galleries"] = [g.to_json(k) for g in top.objects]
    return out, 0


def cmd_comb(args) -> tuple[dict, int]:
    k = _load_complex(args)
    a, b = _endpoints(args)
    top = comb_category(k, a, b, args.max_length)
    out = {
        "endpoints": [list(a), list(b)],
        "objects": len(top.objects),
        "morphisms": len(top.morphisms),
        "trust": {"bound": list(top.bound)},
    }
    if args.homology is not None:
        out["homology"] = _report_family(
            lambda L: _category_chains(comb_category(k, a, b, L), args.homology), list(range(1, args.max_length + 1)), args
        )
    return out, 0


def cmd_coxeter(args) -> tuple[dict, int]:
    g = corpus.group_named(args.group)
    s = box_chambers(g, args.n)
    out = {
        "group": args.group,
        "n": args.n,
        "size": len(s),
        "trust": {"certified": s.certified, "searched_length": s.searched_length, "certificate": s.certificate},
        "elements": [g.to_json(w) for w in s.sorted()],
        "closure": {o: is_downward_closed(s, o).to_json(g) for o in ("bruhat", "left", "right")},
    }
    if args.convexity:
        out["convexity"] = convexity_check(s).to_json(g)
    if args.homology:
        c = normalized_chains(from_complex(coxeter_complex(g, s.elements)), 2)
        out["reduced_homology"] = [reduced_homology(c, i).to_json() for i in range(2)]
    return out, 0


def cmd_verify(args) -> tuple[dict, int]:
    cfg = {}
    if args.suite_config:
        cfg = _read_json(args.suite_config)
        if not isinstance(cfg, dict):
            raise InputError("suite configuration must be a JSON object")
    rep = run_suite(args.suite, cfg)
    return rep.to_json(timings=args.timings), 0 if rep.passed else 1


# ----------------------------------------------------------------------------
# parser


def _source_args(p) -> None:
    p.add_argument("--complex", choices=sorted(corpus.COMPLEXES), help="built-in complex")
    p.add_argument("--input", help="JSON file, or '-' for stdin")


def _endpoint_args(p) -> None:
    p.add_argument("--a", help="start simplex, e.g. 0,1,2")
    p.add_argument("--b", help="end simplex")
    p.add_argument("--homology", type=int, help="report H_k along the truncations")
    p.add_argument("--window", type=int, default=2, help="stabilization window")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="combtopo", description="Finite simplicial and path-space computations.")
    parser.add_argument("--config", help="JSON object whose keys give flag values; explicit flags win")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sset", help="load and validate a simplicial set")
    _source_args(p)
    p.add_argument("--full", action="store_true", help="include the cells and faces")
    p.set_defaults(func=cmd_sset)

    p = sub.add_parser("sd", help="edgewise subdivision")
    _source_args(p)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--full", action="store_true")
    p.set_defaults(func=cmd_sd)

    p = sub.add_parser("homology", help="integral homology in one degree")
    _source_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--reduced", action="store_true")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("paths", help="Stone paths on a binary grid")
    _source_args(p)
    _endpoint_args(p)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--no-fat", action="store_true", help="skip the fat subposet (non-pure complexes)")
    p.add_argument("--show", action="store_true", help="list the paths at the top level")
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("galleries", help="gallery category truncations")
    _source_args(p)
    _endpoint_args(p)
    p.add_argument("--max-chambers", type=int, default=3)
    p.add_argument("--nonmaximal", action="store_true", help="use the subcategory without maximal faces")
    p.add_argument("--show", action="store_true")
    p.set_defaults(func=cmd_galleries)

    p = sub.add_parser("comb", help="comb category truncations")
    _source_args(p)
    _endpoint_args(p)
    p.add_argument("--max-length", type=int, default=3)
    p.set_defaults(func=cmd_comb)

    p = sub.add_parser("coxeter", help="truncated affine Weyl group data")
    p.add_argument("--group", choices=sorted(corpus.GROUPS), default="affine-a2")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--convexity", action="store_true")
    p.add_argument("--homology", action="store_true", help="reduced homology of the truncated complex")
    p.set_defaults(func=cmd_coxeter)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--suite-config", help="JSON object overriding suite parameters")
    p.add_argument("--timings", action="store_true", help="include runtimes (reports are then not byte-stable)")
    p.set_defaults(func=cmd_verify)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = _read_json(known.config)
    if not isinstance(cfg, dict):
        raise InputError("--config must hold a JSON object")
    subs = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in subs.choices.values():
        dests = {a.dest for a in sp._actions}
        sp.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items() if k.replace("-", "_") in dests})


def _echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        body, code = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ComplexError, KeyError, ValueError) as exc:
        if isinstance(exc, TrustError):
            print(f"trust: {exc}", file=sys.stderr)
            return 3
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {"command": args.command, "config": _echo(args), "result": body}
    try:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return code


if __name__ == "__main__":
    sys.exit(main())
