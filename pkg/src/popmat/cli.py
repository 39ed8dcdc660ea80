"""Command line interface.

Exit codes: 0 solution found / verified true; 2 none exists / verified
false (a legitimate mathematical answer); 3 infeasible instance; 4
enumeration budget exceeded; 1 usage, IO, or schema errors.  Human
diagnostics go to stderr, a machine-readable report to --report.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io, nearopt, onesided, twosided, wmi
from .errors import (
    BudgetExceededError,
    InfeasibleError,
    PopmatError,
    SchemaError,
)
from .exhaustive import EnumerationBudget, brute_popular, canon, enumerate_cis, enumerate_common_bases

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NONE = 2
EXIT_INFEASIBLE = 3
EXIT_BUDGET = 4


def _write_report(args, doc):
    if getattr(args, "report", None):
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(io.emit_json(doc))


def _budget(args) -> EnumerationBudget:
    if getattr(args, "budget", None) is None:
        return EnumerationBudget()
    return EnumerationBudget(max_ground=args.budget)


def _require_model(inst, model):
    if inst.model != model:
        raise SchemaError("$.model", f"expected a {model} instance, got {inst.model}")


def _cmd_solve_one(args):
    inst = io.load_instance(args.file)
    _require_model(inst, "one-sided")
    budget = _budget(args)
    try:
        if inst.payload.weights is not None:
            rep = onesided.solve_popular_max_weight(inst.payload, budget)
        else:
            rep = onesided.solve_popular_max_utility(inst.payload, budget)
    except InfeasibleError as exc:
        _write_report(args, io.error_report_doc("infeasible", "solve-one", inst, str(exc)))
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _write_report(args, io.report_to_doc(rep, "solve-one", inst))
    if rep.found:
        print("solution " + " ".join(canon(rep.solution)))
        return EXIT_OK
    print("none-exists")
    return EXIT_NONE


def _cmd_solve_two(args):
    inst = io.load_instance(args.file)
    _require_model(inst, "two-sided")
    prob = inst.payload
    rep = twosided.solve_popular_max_weight_two(
        prob.m1, prob.m2, prob.weights, _budget(args)
    )
    _write_report(args, io.report_to_doc(rep, "solve-two", inst))
    print("solution " + " ".join(canon(rep.solution)))
    return EXIT_OK


def _cmd_kernel(args):
    inst = io.load_instance(args.file)
    _require_model(inst, "two-sided")
    prob = inst.payload
    K = twosided.matroid_kernel(prob.m1, prob.m2)
    doc = {
        "format": io.REPORT_FORMAT,
        "command": "kernel",
        "instance": inst.doc,
        "instance_sha256": io.instance_sha256(inst.doc),
        "status": "solution",
        "solution": list(canon(K)),
    }
    _write_report(args, doc)
    print("kernel " + " ".join(canon(K)))
    return EXIT_OK


def _parse_matching(text):
    if not text:
        return frozenset()
    out = []
    for item in text.split(","):
        if "=" not in item:
            raise SchemaError("$.matching", f"expected a=b, got {item!r}")
        a, b = item.split("=", 1)
        out.append((a.strip(), b.strip()))
    return frozenset(out)


def _cmd_verify_near_opt(args):
    inst = io.load_instance(args.file)
    _require_model(inst, "near-opt")
    G = inst.payload
    known = set(G.edges)
    M = frozenset(
        e if e in known else (e[1], e[0]) for e in _parse_matching(args.matching)
    )
    k = Fraction(args.k) if args.k is not None else None
    ok, rival = nearopt.verify_k_popular(G, M, k)
    doc = {
        "format": io.REPORT_FORMAT,
        "command": "verify-near-opt",
        "instance": inst.doc,
        "instance_sha256": io.instance_sha256(inst.doc),
        "status": "solution" if ok else "none-exists",
        "matching": sorted(list(e) for e in M),
        "popular": ok,
        "dominating_rival": None if rival is None else sorted(list(e) for e in rival),
    }
    _write_report(args, doc)
    if ok:
        print("popular")
        return EXIT_OK
    print("dominated by " + " ".join("=".join(e) for e in sorted(rival)))
    return EXIT_NONE


def _cmd_gen(args):
    if args.kind == "cycle":
        G = nearopt.cycle_gadget(args.K, args.l)
        doc = io.emit_near_opt(G)
        if args.k is not None:
            doc["threshold"] = args.k
    else:
        edges = []
        for spec in args.edge or []:
            try:
                a, b, color = spec.split(":")
            except ValueError:
                raise SchemaError("$.edge", f"expected a:b:color, got {spec!r}") from None
            edges.append((a, b, color))
        a_side = args.a.split(",") if args.a else sorted({a for a, _, _ in edges})
        b_side = args.b.split(",") if args.b else sorted({b for _, b, _ in edges})
        G = nearopt.ColoredBipartite(tuple(a_side), tuple(b_side), tuple(edges))
        inst, _ = nearopt.reduce_exact_matching(G, args.k)
        doc = io.emit_near_opt(inst)
    text = io.emit_json(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_oracle(args):
    inst = io.load_instance(args.file)
    budget = _budget(args)
    sub = args.what
    if sub in ("cis", "bases", "max-weight", "popular-one"):
        _require_model(inst, "one-sided")
        p = inst.payload
        if sub == "cis":
            rows = enumerate_cis(p.m1, p.m2, budget)
            print(json.dumps([list(canon(X)) for X in rows]))
            return EXIT_OK
        if sub == "bases":
            rows = enumerate_common_bases(p.m1, p.m2, budget)
            print(json.dumps([list(canon(X)) for X in rows]))
            return EXIT_OK
        if sub == "max-weight":
            opt, least, allmax = wmi.max_weight_cis(p.m1, p.m2, p.weights or {}, budget)
            print(json.dumps({
                "optimum": io.format_rational(opt),
                "maximizers": [list(canon(X)) for X in allmax],
            }))
            return EXIT_OK
        opt, rivals = onesided._optimal_family(p, budget)
        popular, _ = brute_popular(
            rivals,
            lambda I, J: onesided.delta_over(p.agents, p.assignment(I), p.assignment(J)),
        )
        print(json.dumps([list(canon(X)) for X in popular]))
        return EXIT_OK if popular else EXIT_NONE
    if sub == "popular-two":
        _require_model(inst, "two-sided")
        p = inst.payload
        opt, _, rivals = wmi.max_weight_cis(p.m1.matroid, p.m2.matroid, p.weights, budget)
        score = lambda I, J: twosided.vote_min(p.m1, I, J) + twosided.vote_min(p.m2, I, J)
        popular, _ = brute_popular(rivals, score)
        print(json.dumps([list(canon(X)) for X in popular]))
        return EXIT_OK if popular else EXIT_NONE
    _require_model(inst, "near-opt")
    M = nearopt.solve_near_opt_brute(inst.payload, None if args.k is None else Fraction(args.k))
    if M is None:
        print("none-exists")
        return EXIT_NONE
    print(json.dumps(sorted(list(e) for e in M)))
    return EXIT_OK


def _cmd_verify(args):
    with open(args.file, "r", encoding="utf-8") as fh:
        rep = io.parse_report(fh.read())
    if "instance" not in rep:
        raise SchemaError("$.instance", "report does not embed its instance")
    inst = io.parse_instance(rep["instance"])
    stored = rep.get("instance_sha256")
    actual = io.instance_sha256(inst.doc)
    if stored != actual:
        print(f"hash mismatch: stored {stored}, recomputed {actual}", file=sys.stderr)
        return EXIT_NONE
    budget = _budget(args)
    command = rep["command"]
    if command == "solve-one":
        fresh = (
            onesided.solve_popular_max_weight(inst.payload, budget)
            if inst.payload.weights is not None
            else onesided.solve_popular_max_utility(inst.payload, budget)
        )
    elif command == "solve-two":
        p = inst.payload
        fresh = twosided.solve_popular_max_weight_two(p.m1, p.m2, p.weights, budget)
    else:
        raise SchemaError("$.command", f"cannot re-verify command {command!r}")
    same_status = fresh.status == rep["status"]
    stored_sol = rep.get("solution")
    fresh_sol = None if fresh.solution is None else list(canon(fresh.solution))
    if same_status and fresh.status == "none-exists":
        print("verified none-exists")
        return EXIT_OK
    if same_status and stored_sol is not None:
        # any popular optimum verifies; equality is the default solver contract
        claimed = frozenset(stored_sol)
        opt, rivals = _optimal_family_for(inst, budget)
        ok = claimed in set(rivals) and all(
            _score_for(inst)(claimed, J) >= 0 for J in rivals
        )
        if ok:
            print("verified solution")
            return EXIT_OK
    print("verification failed", file=sys.stderr)
    return EXIT_NONE


def _optimal_family_for(inst, budget):
    if inst.model == "one-sided":
        return onesided._optimal_family(inst.payload, budget)
    p = inst.payload
    opt, _, rivals = wmi.max_weight_cis(p.m1.matroid, p.m2.matroid, p.weights, budget)
    return opt, rivals


def _score_for(inst):
    if inst.model == "one-sided":
        p = inst.payload
        return lambda I, J: onesided.delta_over(p.agents, p.assignment(I), p.assignment(J))
    p = inst.payload
    return lambda I, J: twosided.vote_min(p.m1, I, J) + twosided.vote_min(p.m2, I, J)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--budget", type=int, help="max ground size for exhaustive search"
    )
    common.add_argument("--seed", type=int, help="reserved; accepted for compatibility")
    common.add_argument("--report", help="write a machine-readable report to this path")

    ap = argparse.ArgumentParser(
        prog="popmat",
        description="popular optimal common independent sets under matroid constraints",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "solve-one", parents=[common], help="popular max-weight/utility, one-sided"
    )
    p.add_argument("file")
    p.set_defaults(func=_cmd_solve_one)

    p = sub.add_parser(
        "solve-two", parents=[common], help="popular max-weight, two-sided"
    )
    p.add_argument("file")
    p.set_defaults(func=_cmd_solve_two)

    p = sub.add_parser("verify", parents=[common], help="re-verify a solve report offline")
    p.add_argument("file")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser(
        "kernel", parents=[common], help="matroid kernel of a two-sided instance"
    )
    p.add_argument("file")
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("gen", help="generate gadget instances")
    gsub = p.add_subparsers(dest="kind", required=True)
    g = gsub.add_parser(
        "cycle", parents=[common], help="special-edge cycle with no popular matching"
    )
    g.add_argument("--K", type=int, required=True, help="half the corner count")
    g.add_argument("--l", type=int, required=True, help="inner pairs per special edge")
    g.add_argument("--k", type=int, help="optional threshold to embed")
    g.add_argument("-o", "--out", help="output path (default stdout)")
    g.set_defaults(func=_cmd_gen)
    g = gsub.add_parser(
        "exact-matching", parents=[common], help="reduce a colored graph to near-opt"
    )
    g.add_argument("--edge", action="append", help="edge as a:b:red|blue", default=[])
    g.add_argument("--a", help="comma-separated left vertices (default: from edges)")
    g.add_argument("--b", help="comma-separated right vertices (default: from edges)")
    g.add_argument("--k", type=int, required=True, help="required red edge count")
    g.add_argument("-o", "--out", help="output path (default stdout)")
    g.set_defaults(func=_cmd_gen)

    p = sub.add_parser(
        "verify-near-opt", parents=[common], help="check k-popularity of a matching"
    )
    p.add_argument("file")
    p.add_argument("--matching", required=True, help="comma-separated a=b pairs")
    p.add_argument("--k", help="threshold override")
    p.set_defaults(func=_cmd_verify_near_opt)

    p = sub.add_parser("oracle", parents=[common], help="ground-truth brute-force queries")
    p.add_argument(
        "what",
        choices=["cis", "bases", "max-weight", "popular-one", "popular-two", "near-opt"],
    )
    p.add_argument("file")
    p.add_argument("--k", help="threshold for near-opt")
    p.set_defaults(func=_cmd_oracle)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except FileNotFoundError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PopmatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
