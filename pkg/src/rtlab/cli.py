"""``rtlab`` command line.

Exit status: 0 success, 1 input error (bad flags, malformed JSON, resource
caps), 2 verification failure (a ``--check`` found a violated invariant).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .be import SphereConfig, build_construction, clique_census, structural_report
from .cliques import ResourceCapError
from .oracle import brute_force_max, verify_zykov_small
from .profile import (
    FULL_PRUNING,
    PRUNING_RULES,
    Profile,
    candidate_profiles,
    optimize_sizes,
    parse_assignment,
)
from .skeleton import max_skeleton_value
from .solver import counterexample_search, resolve_jobs, rt_density, table_rows
from .symmetrize import SymmetrizationError, zykov_reduce
from .wgraph import GraphInputError, WeightedGraph, count_cliques

TABLE_COLUMNS = ["q", "p", "profile", "assignment", "value", "exact", "closed_form", "match", "status"]


class InputError(Exception):
    pass


class VerificationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}")


def _dump(obj, out=None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if out is None:
        print(text)
    else:
        with open(out, "w") as f:
            f.write(text + "\n")


def load_graph(path: str) -> WeightedGraph:
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}")
    return WeightedGraph.from_json_dict(data)


# -- subcommands ----------------------------------------------------------------


def cmd_density(args) -> int:
    res = rt_density(args.q, args.p, loose=args.loose, jobs=args.jobs)
    _dump(res.to_json_dict(), args.out)
    if args.check and res.closed_form_match is not None and not res.closed_form_match[2]:
        raise VerificationError(f"density differs from the closed form by {res.closed_form_match[1]:.3g}")
    return 0


def cmd_profiles(args) -> int:
    if args.pruning == "full":
        rules = FULL_PRUNING
    elif args.pruning == "none":
        rules = set()
    else:
        rules = {r for r in args.pruning.split(",") if r}
        bad = rules - set(PRUNING_RULES)
        if bad:
            raise InputError(f"unknown pruning rules: {', '.join(sorted(bad))}")
    profs = candidate_profiles(args.q, args.p, rules)
    _dump({"q": args.q, "p": args.p, "pruning": sorted(rules), "profiles": [list(P) for P in profs]})
    return 0


def cmd_optimize(args) -> int:
    P = Profile(args.profile)
    a, d = optimize_sizes(P, args.q, starts=args.starts, seed=args.seed)
    _dump({
        "profile": list(P), "q": args.q,
        "x": [str(v) if isinstance(v, Fraction) else repr(float(v)) for v in a],
        "value": d.value, "exact": str(d.exact) if d.exact is not None else None,
    })
    return 0


def cmd_symmetrize(args) -> int:
    G = load_graph(args.input)
    N0 = count_cliques(G, args.q)
    try:
        H, P, trace = zykov_reduce(G, args.q, args.p, check_skeleton=args.check)
    except SymmetrizationError as e:
        raise VerificationError(str(e))
    if args.trace:
        _dump(trace.to_json_dict(), args.trace)
    N1 = count_cliques(H, args.q)
    out = {"graph": H.to_json_dict(), "profile": list(P) if P else None,
           "N_before": str(N0), "N_after": str(N1), "steps": len(trace)}
    _dump(out, args.out)
    if N1 < N0:
        raise VerificationError(f"N_q decreased from {N0} to {N1}")
    return 0


def cmd_skeleton(args) -> int:
    G = load_graph(args.input)
    value, sk = max_skeleton_value(G)
    out = {"value": value, "X": sorted(sk.X), "Y": sorted(sk.Y)}
    if args.p is not None:
        out["p"] = args.p
        out["skeleton_free"] = value <= args.p - 1
    _dump(out)
    return 0


def cmd_oracle(args) -> int:
    rep = brute_force_max(args.n, args.q, args.p, jobs=args.jobs, keep=max(1, args.witnesses))
    out = rep.to_json_dict(graphs=args.witnesses > 0)
    if args.verify:
        out["zykov_verified"] = verify_zykov_small(args.n, args.q, args.p, report=rep)
    _dump(out, args.out)
    if args.verify and not out["zykov_verified"]:
        raise VerificationError("no profile graph attains the exhaustive maximum")
    return 0


def cmd_be(args) -> int:
    cfg = SphereConfig(args.d, args.n, args.eps, args.seed)
    sizes = parse_assignment(args.sizes.split(",")) if args.sizes else None
    G = build_construction(cfg, args.s, args.t, sizes)
    census = clique_census(G, args.q_max, limit=args.node_limit)
    out = {"config": {"d": cfg.d, "n": cfg.n, "eps": cfg.eps, "mu": cfg.mu, "seed": cfg.seed,
                      "s": args.s, "t": args.t},
           "census": census.to_json_dict()}
    if args.report:
        out["report"] = structural_report(G)
    if args.graph_out:
        _dump(G.to_graph_json(), args.graph_out)
    if args.sidecar_out:
        _dump(G.sidecar_json(), args.sidecar_out)
    _dump(out, args.out)
    if args.check:
        problems = []
        if census.omega > args.s + args.t:
            problems.append(f"clique number {census.omega} exceeds s+t={args.s + args.t}")
        if (args.s, args.t) == (2, 1) and census.counts.get(4, 0):
            problems.append(f"BE pair contains {census.counts[4]} copies of K_4")
        if G.rule_violations():
            problems.append("adjacency disagrees with the distance rules")
        if problems:
            raise VerificationError("; ".join(problems))
    return 0


def cmd_counterexample(args) -> int:
    cert = counterexample_search(args.k, args.c, q_max=args.q_max, part=args.part)
    _dump(cert.to_json_dict())
    if args.check and cert.found and not cert.gap_ok:
        raise VerificationError("density gap is below c times the conjectured value")
    return 0


def cmd_table(args) -> int:
    rows = table_rows(range(args.q_min, args.q_max + 1), range(args.p_min, args.p_max + 1), jobs=args.jobs)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=TABLE_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.out:
        with open(args.out, "w") as f:
            f.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    if args.check and any(r["match"] == "false" for r in rows):
        raise VerificationError("some rows disagree with their closed form")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rtlab", description="Ramsey-Turán clique density toolkit")
    ap.add_argument("--jobs", type=int, default=None, help="worker processes (default: $RTLAB_JOBS or 1)")
    common = _Parser(add_help=False)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("density", parents=[common], help="best profile density for (q, p)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--loose", action="store_true", help="also allow s + t < p - 1")
    p.add_argument("--check", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("profiles", parents=[common], help="candidate profiles for (q, p)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--pruning", default="full", help="full, none, or a comma list of rules")
    p.set_defaults(func=cmd_profiles)

    p = sub.add_parser("optimize", parents=[common], help="optimal part sizes for one profile")
    p.add_argument("--profile", type=_int_list, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--starts", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("symmetrize", parents=[common], help="reduce a weighted graph to a profile graph")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--trace")
    p.add_argument("--out")
    p.add_argument("--check", action="store_true", help="verify skeleton-freeness after every step")
    p.set_defaults(func=cmd_symmetrize)

    p = sub.add_parser("skeleton", parents=[common], help="largest skeleton of a weighted graph")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--p", type=int)
    p.set_defaults(func=cmd_skeleton)

    p = sub.add_parser("oracle", parents=[common], help="exhaustive maximum over small weighted graphs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--witnesses", type=int, default=0, help="dump the first m maximizers")
    p.add_argument("--verify", action="store_true", help="also check that a profile graph attains the maximum")
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("be", parents=[common], help="geometric construction and clique census")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--sizes", help="comma-separated part shares")
    p.add_argument("--q-max", type=int, default=4)
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--report", action="store_true")
    p.add_argument("--graph-out")
    p.add_argument("--sidecar-out")
    p.add_argument("--check", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_be)

    p = sub.add_parser("counterexample", parents=[common], help="least q beating the conjectured family")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", type=_fraction, required=True)
    p.add_argument("--q-max", type=int, default=200)
    p.add_argument("--part", type=int, choices=(1, 2), default=1)
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("table", parents=[common], help="CSV grid of densities and closed forms")
    p.add_argument("--q-min", type=int, default=2)
    p.add_argument("--q-max", type=int, default=5)
    p.add_argument("--p-min", type=int, default=4)
    p.add_argument("--p-max", type=int, default=14)
    p.add_argument("--out")
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_table)
    return ap


def _resolved(args) -> dict:
    return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in sorted(vars(args).items()) if k != "func"}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.jobs = resolve_jobs(args.jobs)
        print(json.dumps({"config": _resolved(args)}), file=sys.stderr)
        return args.func(args)
    except InputError as e:
        print(f"rtlab: error: {e}", file=sys.stderr)
        return 1
    except ResourceCapError as e:
        print(f"rtlab: error: resource cap exceeded: {e.cap}", file=sys.stderr)
        return 1
    except (GraphInputError, ValueError) as e:
        print(f"rtlab: error: {e}", file=sys.stderr)
        return 1
    except VerificationError as e:
        print(f"rtlab: verification failed: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
