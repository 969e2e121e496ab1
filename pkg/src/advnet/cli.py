"""Bounds, coding schemes and exact search for the 1-shot capacity of networks under restricted adversarial noise.

Exit codes: 0 success, 1 a verification found a collision, 2 invalid input,
3 a budget or size limit was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds, netgraph, reduce, schemes, search
from .errors import InvalidInput, LimitExceeded, NotTwoLevel
from .instances import Instance, library_names, load_instance

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3
BOUND_ALIASES = {"partition": "thm61", "trimmed": "prop63"}


def _ids(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected edge ids, got {text!r}") from None


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=1, sort_keys=True, default=str))
    else:
        print(text)


def _user_ids(inst: Instance, ids) -> list[int]:
    """Translate edge ids of the instance file to internal ids."""
    out = []
    for i in ids:
        if i not in inst.id_map:
            raise InvalidInput(f"edge id {i} out of range")
        out.append(inst.id_map[i])
    return out


def _file_ids(inst: Instance, ids) -> list[int]:
    back = {v: k for k, v in inst.id_map.items()}
    return sorted(back.get(i, i) for i in ids)


# ---------------------------------------------------------------- subcommands


def cmd_validate(args) -> int:
    inst = load_instance(args.file)
    net = inst.network
    lm = netgraph.detect_levels(net)
    cuts = {T: netgraph.min_cut(net, net.source, T) for T in net.terminals}
    payload = {
        "alphabet": inst.q,
        "t": inst.t,
        "vertices": len(net.vertices),
        "edges": len(net.edges),
        "terminals": list(net.terminals),
        "vulnerable": len(net.vulnerable),
        "min_cuts": cuts,
        "levels": None if lm is None else lm.m,
        "level_matrices": None if lm is None else [list(map(list, m)) for m in lm.matrices],
        "edge_id_map": {str(k): v for k, v in inst.id_map.items() if k != v},
    }
    lines = [
        f"vertices {len(net.vertices)}, edges {len(net.edges)}, |U| = {len(net.vulnerable)}",
        "terminals " + ", ".join(f"{T} (min-cut {c})" for T, c in cuts.items()),
        "levels: " + ("not layered" if lm is None else str(lm.m)),
    ]
    if payload["edge_id_map"]:
        lines.append("edge ids renumbered: " + json.dumps(payload["edge_id_map"]))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_bound(args) -> int:
    inst = load_instance(args.file)
    net, q = inst.network, inst.q
    t = inst.t if args.t is None else args.t
    which = ["singleton", "thm61", "prop63", "full", "family"] if args.which == "all" else [
        BOUND_ALIASES.get(args.which, args.which)
    ]
    reports = []
    for w in which:
        if w == "singleton":
            reports.append(bounds.singleton_bound(net, t))
        elif w == "full":
            reports.append(bounds.full_adversary_value(net, t))
        else:
            try:
                a, b = schemes.two_level_degrees(net)
            except NotTwoLevel:
                if args.which == "all":
                    continue
                raise
            if set(net.vulnerable) != set(net.source_edges):
                if args.which == "all":
                    continue
                raise InvalidInput("this bound assumes exactly the source edges are vulnerable")
            if w == "thm61":
                reports.append(bounds.lower_thm61(a, b, t))
            elif w == "prop63":
                reports.append(bounds.lower_prop63(a, b, t))
            else:
                fam = bounds.match_family(a, b, t)
                if fam is None:
                    if args.which == "all":
                        continue
                    raise InvalidInput("network is not a member of a named family")
                reports.append(bounds.family_strict_upper(*fam, q=q))
    payload = {"t": t, "alphabet": q, "bounds": [r.to_json() for r in reports]}
    text = "\n".join(f"{r.name:16s} {str(r):>12s}  {r.rule}" for r in reports)
    _emit(args, payload, text)
    return EXIT_OK


def cmd_scheme(args) -> int:
    if args.verify_file:
        data = json.loads(Path(args.verify_file).read_text())
        if "witness" in data and "max_code_size" in data:
            scheme = search.CapacityCertificate.from_json(data).scheme()
        else:
            scheme = schemes.Scheme.from_json(data)
    else:
        if args.name is None:
            raise InvalidInput("give a scheme name or --verify-file")
        if args.name not in schemes.SCHEMES:
            raise InvalidInput(f"unknown scheme {args.name!r}; known: {', '.join(schemes.SCHEMES)}")
        scheme = schemes.SCHEMES[args.name](args.q, args.t, args.a, args.b)
    if args.out:
        scheme.dump(args.out)
    payload = {"scheme": scheme.name, "code_size": scheme.claimed_code_size, "rate": scheme.rate}
    text = f"{scheme.name}: q={scheme.q} t={scheme.t} size {scheme.claimed_code_size} rate {scheme.rate:.9g}"
    code = EXIT_OK
    if args.verify or args.verify_file:
        rep = schemes.verify(scheme, method=args.method)
        payload["verification"] = rep.to_json()
        ok = rep.passed and rep.claimed_ok
        text += f"\nverification ({rep.method}): {'pass' if ok else 'FAIL'}"
        if rep.witness:
            text += "\ncollision: " + json.dumps(rep.witness, default=str)
        code = EXIT_OK if ok else EXIT_VIOLATION
    _emit(args, payload, text)
    return code


def cmd_capacity(args) -> int:
    inst = load_instance(args.file)
    budget = search.SearchBudget(
        max_codes=args.budget, time_limit=args.time_limit, symmetry=not args.no_symmetry
    )
    cache = None if args.no_cache else search.default_cache_dir()
    fn = search.exact_linear_capacity if args.linear else search.exact_capacity
    try:
        cert = fn(inst.network, inst.q, inst.t, budget, cache_dir=cache, greedy=args.greedy)
    except LimitExceeded as exc:
        partial = getattr(exc, "certificate", None)
        if partial is not None and args.out:
            Path(args.out).write_text(json.dumps(partial.to_json(), indent=1, sort_keys=True))
        raise
    if args.out:
        Path(args.out).write_text(json.dumps(cert.to_json(), indent=1, sort_keys=True))
    kind = "linear" if args.linear else "all"
    text = (
        f"max code size {cert.max_code_size} (capacity {cert.value:.9g}) over {kind} network codes, "
        f"{'proved optimal' if cert.exhaustive else 'lower bound only'}; "
        f"{cert.codes_examined}/{cert.codes_total} codes examined"
    )
    _emit(args, cert.to_json(), text)
    return EXIT_OK


def cmd_reduce(args) -> int:
    inst = load_instance(args.file)
    net = inst.network
    t = inst.t if args.t is None else args.t
    if args.auto:
        pairs = "auto"
    else:
        if args.cut1 is None or args.cut2 is None:
            raise InvalidInput("give --cut1 and --cut2, or --auto")
        c1 = frozenset(_user_ids(inst, args.cut1))
        c2 = frozenset(_user_ids(inst, args.cut2))
        terms = [args.terminal] if args.terminal else [
            T for T in net.terminals
            if netgraph.disconnects(net, c1, T) and netgraph.disconnects(net, c2, T)
        ]
        if not terms:
            raise InvalidInput("the cuts do not separate the source from any terminal")
        pairs = [netgraph.CutPair(c1, c2, terms[0])]
    rep, chain = reduce.double_cut_bound(net, t, pairs, q=inst.q, max_pairs=args.max_pairs)
    if args.emit_chain:
        Path(args.emit_chain).write_text(chain.dumps() + "\n")
    pair = chain.stages[1]["mapping"]
    assoc = chain.stages[3]["mapping"]
    payload = {"bound": rep.to_json(), "chain": chain.to_json()}
    text = (
        f"double-cut bound {rep} ({rep.rule})\n"
        f"terminal {pair['terminal']}, cut1 {_file_ids(inst, pair['cut1'])}, "
        f"cut2 {_file_ids(inst, pair['cut2'])}\n"
        f"associated 2-level network ({assoc['a']}, {assoc['b']})"
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_curves(args) -> int:
    if args.n < 2 or not 0 < args.pstep <= 0.5:
        raise InvalidInput("need n >= 2 and 0 < pstep <= 0.5")
    csv = bounds.curves_csv(args.generalization, args.n, args.pstep)
    if args.out:
        Path(args.out).write_text(csv)
    else:
        sys.stdout.write(csv)
    return EXIT_OK


def cmd_list(args) -> int:
    payload = {"instances": library_names(), "schemes": list(schemes.SCHEMES)}
    _emit(args, payload, "instances: " + " ".join(payload["instances"])
          + "\nschemes: " + " ".join(payload["schemes"]))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="advnet", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse an instance and summarize it")
    s.add_argument("file", help="instance JSON file or built-in instance name")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("bound", help="evaluate capacity bounds")
    s.add_argument("file")
    s.add_argument("--which", default="all",
                   choices=["singleton", "partition", "trimmed", "thm61", "prop63", "full", "family", "all"],
                   help="partition/trimmed are the MDS partition lower bounds (also named thm61/prop63)")
    s.add_argument("--t", type=int, help="override the instance's t")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("scheme", help="build and verify a coding scheme")
    s.add_argument("name", nargs="?", help="scheme name (see `advnet list`)")
    s.add_argument("--q", type=int, default=3)
    s.add_argument("--t", type=int, default=1)
    s.add_argument("--a", type=_ids, default=None, help="source-side degrees, e.g. 2,5,6")
    s.add_argument("--b", type=_ids, default=None, help="terminal-side degrees")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--verify-file", help="re-verify a scheme or capacity certificate file")
    s.add_argument("--method", default="auto", choices=["auto", "exhaustive", "coset"])
    s.add_argument("--out", help="write the scheme certificate here")
    s.set_defaults(func=cmd_scheme)

    s = sub.add_parser("capacity", help="exhaustive 1-shot capacity search")
    s.add_argument("file")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="all network codes (default)")
    mode.add_argument("--linear", action="store_true", help="linear network codes only")
    s.add_argument("--budget", type=int, default=2_000_000, help="max network codes")
    s.add_argument("--time-limit", type=float, default=None, help="seconds")
    s.add_argument("--greedy", action="store_true", help="greedy outer codes (lower bound)")
    s.add_argument("--no-symmetry", action="store_true")
    s.add_argument("--no-cache", action="store_true")
    s.add_argument("--out", help="write the certificate here")
    s.set_defaults(func=cmd_capacity)

    s = sub.add_parser("reduce", help="double-cut reduction bound")
    s.add_argument("file")
    s.add_argument("--cut1", type=_ids)
    s.add_argument("--cut2", type=_ids)
    s.add_argument("--terminal")
    s.add_argument("--auto", action="store_true")
    s.add_argument("--max-pairs", type=int, default=reduce.DEFAULT_MAX_PAIRS)
    s.add_argument("--t", type=int)
    s.add_argument("--emit-chain", help="write the reduction chain JSON here")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("curves", help="BSC-network capacity curves as CSV")
    s.add_argument("--generalization", type=int, choices=[1, 2], required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--pstep", type=float, default=0.01)
    s.add_argument("--out")
    s.set_defaults(func=cmd_curves)

    s = sub.add_parser("list", help="built-in instances and schemes")
    s.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInput, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
