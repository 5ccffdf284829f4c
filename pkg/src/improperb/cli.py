"""Command-line front end.

Every command prints one JSON document (sorted keys) to stdout.  Exit
status: 0 decided, 2 budget exhausted, 1 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

from . import constructions, defect, extremal, mindeg, propb
from .core import (
    FormatError,
    ValidationError,
    complete_graph,
    parse_family,
    parse_graph,
    parse_lists,
    serialize_family,
    serialize_graph,
    serialize_lists,
)

EXIT_OK, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(args, name: str, text: str, out: dict) -> None:
    if not args.out:
        return
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, name)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    out.setdefault("certificates", []).append(path)


def _budget(args) -> extremal.SearchBudget:
    return extremal.SearchBudget(max_nodes=args.budget_nodes)


def _m_value(args) -> int:
    if args.m is not None:
        return args.m
    res = extremal.compute_m(args.k, args.l, _budget(args), threads=args.threads)
    if res.status != "exact":
        raise UsageError(f"M({args.k},{args.l}) is {res.status}; pass --m explicitly")
    return res.value


# ------------------------------------------------------------------ commands

def cmd_propb_check(args):
    F = parse_family(_read(args.family))
    w = propb.find_property_b_witness(F)
    return {"property_b": w is not None, "witness": w.as_lists()[0] if w else None}, EXIT_OK


def cmd_propb_bj(args):
    F = parse_family(_read(args.family))
    w = propb.find_property_bj_witness(F, args.j)
    return {"j": args.j, "property_bj": w is not None, "witness": w.as_lists() if w else None}, EXIT_OK


def _extremal_out(args, res, label):
    out = {"quantity": label, **res.to_json()}
    if res.certificate is not None:
        out["certificate_text"] = serialize_family(res.certificate)
        _write(args, "certificate.fam", out["certificate_text"], out)
    return out, EXIT_BUDGET if res.status == "unknown" else EXIT_OK


def cmd_extremal_m(args):
    res = extremal.compute_m(args.k, args.l, _budget(args), threads=args.threads)
    return _extremal_out(args, res, f"M({args.k},{args.l})")


def cmd_extremal_mj(args):
    res = extremal.compute_mj(args.j, args.k, args.l, _budget(args), threads=args.threads)
    return _extremal_out(args, res, f"M({args.j},{args.k},{args.l})")


def cmd_extremal_bounds(args):
    lo, hi = extremal.bound_shape_m(args.k) if args.j is None else extremal.bound_shape_mj(args.j, args.k)
    return {"k": args.k, "j": args.j, "lower_shape": lo, "upper_shape": hi,
            "note": "shapes only; the hidden constants are unknown"}, EXIT_OK


def cmd_colour_chi(args):
    G = parse_graph(_read(args.graph))
    k = defect.chi_t(G, args.t)
    c = defect.find_t_improper_k_colouring(G, k, args.t) if k else ()
    return {"t": args.t, "chi_t": k, "colouring": list(c)}, EXIT_OK


def cmd_colour_list(args):
    G = parse_graph(_read(args.graph))
    L = parse_lists(_read(args.lists))
    c = defect.find_t_improper_list_colouring(G, L, args.t)
    return {"t": args.t, "colourable": c is not None, "colouring": list(c) if c else None}, EXIT_OK


def cmd_colour_choosable(args):
    G = parse_graph(_read(args.graph))
    if args.l is None:
        try:
            ok = defect.ch_t_upper_via_spectrum_cap(G, args.t, args.k, max_nodes=args.budget_nodes,
                                                    threads=args.threads)
        except defect.BudgetExceeded as e:
            return {"t": args.t, "k": args.k, "l": None, "choosable": None, "complete": False,
                    "reason": str(e)}, EXIT_BUDGET
        return {"t": args.t, "k": args.k, "l": None, "choosable": ok, "complete": True}, EXIT_OK
    v = defect.is_t_improper_kl_choosable(G, args.k, args.l, args.t, max_nodes=args.budget_nodes,
                                          threads=args.threads)
    out = {"t": args.t, "k": args.k, "l": args.l, **v.to_json(), "budget_used": v.assignments_examined}
    if v.bad_assignment is not None:
        _write(args, "bad.lists", serialize_lists(v.bad_assignment), out)
    return out, EXIT_OK if v.complete else EXIT_BUDGET


def cmd_colour_greedy(args):
    G = parse_graph(_read(args.graph))
    L = parse_lists(_read(args.lists))
    c = defect.greedy_list_colouring(G, L, args.t)
    return {"t": args.t, "degeneracy": defect.degeneracy(G), "success": c is not None,
            "colouring": list(c) if c else None}, EXIT_OK


def _instance_out(args, G, parts, L, meta):
    out = {**meta, "n": G.n, "edges": len(G.edges), "parts": [list(p) for p in parts]}
    _write(args, "instance.graph", serialize_graph(G), out)
    if L is not None:
        _write(args, "instance.lists", serialize_lists(L), out)
    _write(args, "instance.json", json.dumps(out, sort_keys=True, indent=2) + "\n", out)
    return out, EXIT_OK


def cmd_construct_multipartite(args):
    sizes = tuple(int(x) for x in args.sizes.split(","))
    spec = constructions.MultipartiteSpec(sizes, args.t, args.style)
    G, parts = constructions.build_multipartite(spec)
    return _instance_out(args, G, parts, None, {"kind": "multipartite", "t": args.t, "style": args.style})


def cmd_construct_adversarial(args):
    F = parse_family(_read(args.family))
    G, parts, L = constructions.adversarial_multipartite(F, args.j, args.t)
    meta = {"kind": "adversarial", "j": args.j, "t": args.t, "k": F.k, "l": F.ell}
    if args.verify:
        meta["colourable"] = defect.find_t_improper_list_colouring(G, L, args.t) is not None
    return _instance_out(args, G, parts, L, meta)


def cmd_mindeg_d(args):
    m = _m_value(args)
    D, ceil = mindeg.threshold_D(mindeg.ThresholdInput(args.t, args.k, args.l, m))
    return {"t": args.t, "k": args.k, "l": args.l, "m": m, "D": D, "ceil": ceil,
            "p": mindeg.sampling_probability(args.k, m)}, EXIT_OK


def cmd_mindeg_simulate(args):
    if args.seed is None:
        raise UsageError("mindeg simulate requires --seed")
    res = extremal.compute_m(args.k, args.l, _budget(args), threads=args.threads)
    if res.status != "exact":
        raise UsageError(f"M({args.k},{args.l}) is {res.status}; no smallest family to sample from")
    F = res.certificate
    _, ceil = mindeg.threshold_D(mindeg.ThresholdInput(args.t, args.k, args.l, len(F)))
    G = parse_graph(_read(args.graph)) if args.graph else complete_graph(args.n or ceil + 1)
    rep = mindeg.sample_stage1(G, F, args.t, args.seed, args.trials)
    if args.format == "csv":
        return rep.to_csv(), EXIT_OK
    return {"t": args.t, "k": args.k, "l": args.l, "m": len(F), "ceil_D": ceil,
            "min_degree": G.min_degree(), **rep.to_json()}, EXIT_OK


def cmd_mindeg_chernoff(args):
    m = _m_value(args)
    D = args.D
    if D is None:
        D = mindeg.threshold_D(mindeg.ThresholdInput(args.t, args.k, args.l, m))[1]
    lhs, rhs = mindeg.chernoff_step_check(D, m, args.k, args.t)
    return {"t": args.t, "k": args.k, "m": m, "D": D, "lhs": lhs, "rhs": rhs, "holds": lhs <= rhs,
            "not_good_bound": mindeg.not_good_bound(m)}, EXIT_OK


def cmd_mindeg_unionbound(args):
    v = mindeg.union_bound_check(args.n, args.k, args.m)
    return {"n": args.n, "k": args.k, "m": args.m, "value": v, "is_one": math.isclose(v, 1.0, rel_tol=1e-9)}, EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-nodes", type=int, default=50_000_000)
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", metavar="DIR")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = _Parser(prog="improperb", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(group, name, func, help_):
        p = group.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    g = groups.add_parser("propb", help="Property B deciders").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "check", cmd_propb_check, "decide Property B")
    p.add_argument("--family", required=True)
    p = leaf(g, "bj", cmd_propb_bj, "decide Property B(j)")
    p.add_argument("--family", required=True)
    p.add_argument("--j", type=int, required=True)

    g = groups.add_parser("extremal", help="M(k,l) and M(j,k,l)").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "m", cmd_extremal_m, "compute M(k,l)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p = leaf(g, "mj", cmd_extremal_mj, "compute M(j,k,l)")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p = leaf(g, "bounds", cmd_extremal_bounds, "evaluate bound shapes")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--j", type=int)

    g = groups.add_parser("colour", help="t-improper colouring").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "chi", cmd_colour_chi, "t-improper chromatic number")
    p.add_argument("--graph", required=True)
    p.add_argument("--t", type=int, default=0)
    p = leaf(g, "list", cmd_colour_list, "t-improper list colouring")
    p.add_argument("--graph", required=True)
    p.add_argument("--lists", required=True)
    p.add_argument("--t", type=int, default=0)
    p = leaf(g, "choosable", cmd_colour_choosable, "(k,l)-choosability; omit --l for k-choosability")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int)
    p.add_argument("--t", type=int, default=0)
    p = leaf(g, "greedy", cmd_colour_greedy, "greedy list colouring in degeneracy order")
    p.add_argument("--graph", required=True)
    p.add_argument("--lists", required=True)
    p.add_argument("--t", type=int, default=0)

    g = groups.add_parser("construct", help="explicit instances").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "multipartite", cmd_construct_multipartite, "complete t-improperly multipartite graph")
    p.add_argument("--sizes", required=True, help="comma-separated part sizes")
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--style", choices=constructions.STYLES, default="empty")
    p = leaf(g, "adversarial", cmd_construct_adversarial, "uncolourable list assignment")
    p.add_argument("--family", required=True)
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--verify", action="store_true", help="run the exhaustive solver on the instance")

    g = groups.add_parser("mindeg", help="minimum-degree threshold").add_subparsers(dest="cmd", required=True)
    for name, func, help_ in (("d", cmd_mindeg_d, "threshold D"),
                              ("chernoff", cmd_mindeg_chernoff, "exact binomial tail vs 2 m^-4")):
        p = leaf(g, name, func, help_)
        p.add_argument("--t", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--l", type=int, required=True)
        p.add_argument("--m", type=int, help="M(k,l); computed when omitted")
        if name == "chernoff":
            p.add_argument("--D", type=int, help="degree; defaults to ceil(D)")
    p = leaf(g, "simulate", cmd_mindeg_simulate, "Monte Carlo replay of the first random stage")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--graph", help="graph file; default K_n with n = ceil(D) + 1")
    p.add_argument("--n", type=int, help="order of the default complete graph")
    p = leaf(g, "unionbound", cmd_mindeg_unionbound, "evaluate k^(2pn) e^(-n/2m)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    start = time.perf_counter()
    try:
        if args.format == "csv" and args.func is not cmd_mindeg_simulate:
            raise UsageError("--format csv is only available for 'mindeg simulate'")
        out, code = args.func(args)
    except (FormatError, ValidationError, UsageError, ValueError) as e:
        print(f"improperb: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    if isinstance(out, str):
        sys.stdout.write(out)
        return code
    out = {"command": " ".join([args.group, args.cmd]), **out,
           "seed": args.seed, "threads": args.threads,
           "wall_time": round(time.perf_counter() - start, 6)}
    print(json.dumps(out, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
