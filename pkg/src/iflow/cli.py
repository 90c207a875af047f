"""Command-line front end: ``iflow <subcommand> ...``.

Exit codes: 0 success, 1 negative verdict (infeasible, not series-parallel,
not certified), 2 input error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import generators, instance_io
from .mcf import InconsistentInputError, certify_optimality, min_cost_flow
from .milp import emit_milp
from .model import validate_flow
from .oracle import BudgetExceeded, worst_value_bruteforce
from .paradox import (
    complete_instance,
    detect_paradox,
    most_negative_improving_path_complete,
    paradox_instance_complete,
    worst_value_profile,
)
from .spdp import NotSeriesParallel, parse_sptree, worst_value_sp
from .structure import extremalize_to_forest, interior_arcs

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class _Out:
    def __init__(self, quiet: bool):
        self.quiet = quiet

    def verdict(self, text: str):
        print(text)

    def info(self, text: str):
        if not self.quiet:
            print(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_instance(args):
    inst = instance_io.parse_instance(_read(args.instance))
    if getattr(args, "flow_amount", None) is not None:
        inst = inst.with_flow(args.flow_amount)
    return inst


def _flow_table(instance, flow) -> str:
    lines = ["  arc  tail  head  cost  flow"]
    for a in instance.arcs:
        lines.append(f"  {a.id:>3}  {a.tail:>4}  {a.head:>4}  {a.cost:>4}  {flow[a.id]:>4}")
    return "\n".join(lines)


def cmd_solve(args, out: _Out) -> int:
    inst = _load_instance(args)
    scen = instance_io.parse_scenario(_read(args.scenario), inst)
    sol = min_cost_flow(inst, scen)
    if sol is None:
        out.verdict("INFEASIBLE")
        return EXIT_NO
    out.verdict(f"cost = {sol.cost}")
    out.info(_flow_table(inst, sol.flow))
    if args.flow_out:
        _write(args.flow_out, instance_io.write_flow(sol.flow))
    if args.pi_out:
        _write(args.pi_out, instance_io.write_potentials(sol.potentials))
    return EXIT_OK


def cmd_worst(args, out: _Out) -> int:
    inst = _load_instance(args)
    if args.method == "sp":
        try:
            tree = parse_sptree(args.sptree, inst) if args.sptree else None
            value = worst_value_sp(inst, tree)
        except NotSeriesParallel:
            out.verdict("NOT SERIES-PARALLEL")
            return EXIT_NO
        if value is None:
            out.verdict("INFEASIBLE")
            return EXIT_NO
        out.verdict(f"c_w = {value}")
        if args.scenario_out or args.flow_out:
            out.info("note: the series-parallel method yields the value only; no files written")
        return EXIT_OK

    res = worst_value_bruteforce(inst, workers=args.workers)
    if res is None:
        out.verdict("INFEASIBLE")
        return EXIT_NO
    out.verdict(f"c_w = {res.c_w}")
    out.info(f"worst scenario: {' '.join(map(str, res.scenario))}")
    out.info(f"feasible scenarios: {res.feasible_count}")
    if args.scenario_out:
        _write(args.scenario_out, instance_io.write_scenario(res.scenario))
    if args.flow_out:
        _write(args.flow_out, instance_io.write_flow(res.flow))
    return EXIT_OK


def cmd_extremalize(args, out: _Out) -> int:
    inst = _load_instance(args)
    scen = instance_io.parse_scenario(_read(args.scenario), inst)
    flow = instance_io.parse_flow(_read(args.flow), inst)
    new_scen, new_flow = extremalize_to_forest(inst, scen, flow)
    inner = sorted(interior_arcs(inst, new_scen))
    out.verdict(f"cost = {new_flow.total_cost}")
    out.verdict(f"interior arcs: {len(inner)} (bound n-1 = {inst.num_nodes - 1})")
    for e in inner:
        a = inst.arcs[e]
        out.info(f"  arc {e} ({a.tail},{a.head}) u = {new_scen[e]} in [{a.lower},{a.upper}]")
    if args.scenario_out:
        _write(args.scenario_out, instance_io.write_scenario(new_scen))
    if args.flow_out:
        _write(args.flow_out, instance_io.write_flow(new_flow))
    return EXIT_OK


def cmd_paradox(args, out: _Out) -> int:
    inst = _load_instance(args)
    profile = worst_value_profile(inst, args.fmax, method="brute")
    out.info("   f   c_w")
    for f, cw in profile:
        out.info(f"  {f:>2}  {'-' if cw is None else cw:>4}")
    rep = detect_paradox(inst, args.fmax)
    if rep is None:
        out.verdict("NO PARADOX")
        return EXIT_OK
    out.verdict(f"PARADOX at f = {rep.f}: c_w {rep.c_w_at_f} -> {rep.c_w_at_f_plus_1}")
    if rep.witness is not None:
        out.verdict(f"witness cost = {rep.witness.signed_cost(inst)}")
        out.info(f"witness path: {rep.witness.describe(inst)}")
    if rep.note:
        out.info(f"note: {rep.note}")
    return EXIT_OK


def _read_costs(path: str, n: int):
    rows = [line.split() for line in _read(path).splitlines() if line.strip() and not line.startswith("#")]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"cost file must hold {n} rows of {n} integers")
    return [[int(v) for v in r] for r in rows]


def cmd_immune(args, out: _Out) -> int:
    n = args.complete
    costs = _read_costs(args.costs, n)
    s, t = args.source, args.sink if args.sink is not None else n
    path, cost = most_negative_improving_path_complete(n, costs, s, t)
    out.verdict("IMMUNE" if cost >= 0 else "NOT-IMMUNE")
    out.verdict(f"most negative improving path cost = {cost}")
    out.info(f"path: {path.describe(complete_instance(n, costs, s, t))}")
    if cost < 0 and args.instance_out:
        built, _ = paradox_instance_complete(n, costs, s, t)
        _write(args.instance_out, instance_io.write_instance(built))
    return EXIT_OK


def cmd_emit_milp(args, out: _Out) -> int:
    inst = _load_instance(args)
    _write(args.output, emit_milp(inst, tighten=args.tighten))
    return EXIT_OK


def cmd_certify(args, out: _Out) -> int:
    inst = _load_instance(args)
    scen = instance_io.parse_scenario(_read(args.scenario), inst)
    flow = instance_io.parse_flow(_read(args.flow), inst)
    pi = instance_io.parse_potentials(_read(args.pi), inst)
    report = validate_flow(inst, scen, flow)
    cert = certify_optimality(inst, scen, flow, pi)
    problems = list(report.problems) + list(cert.problems)
    if problems:
        out.verdict("NOT CERTIFIED")
        for p in problems:
            out.info(f"  {p}")
        return EXIT_NO
    out.verdict(f"CERTIFIED cost = {flow.total_cost}")
    return EXIT_OK


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def cmd_gen(args, out: _Out) -> int:
    kind = args.family
    if kind == "knapsack":
        inst = generators.gen_knapsack_reduction(
            generators.KnapsackData(args.b, _ints(args.weights), _ints(args.values))
        )
    elif kind == "chain":
        inst = generators.gen_interior_chain(args.n)
    elif kind == "paradox-simple":
        inst = generators.gen_paradox_simple()
    elif kind == "paradox-complex":
        inst = generators.gen_paradox_complex()
    elif kind == "cut":
        inst = generators.gen_cut_complete(args.n)
    elif kind == "random":
        inst = generators.gen_random(args.n, args.m, args.cap, args.cost, args.f, args.seed)
    else:
        inst = generators.gen_random_sp(args.m, args.cap, args.cost, args.f, args.seed)
    _write(args.output, instance_io.write_instance(inst))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-q", "--quiet", action="store_true", help="print verdict lines only")

    p = argparse.ArgumentParser(prog="iflow", description="Worst-case minimum cost flows under interval capacities.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_instance(name, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("instance", help="instance file ('-' for stdin)")
        sp.add_argument("--flow-amount", "-f", type=int, help="override the instance flow amount")
        return sp

    sp = with_instance("solve", "min cost flow for one scenario")
    sp.add_argument("--scenario", required=True)
    sp.add_argument("--flow-out")
    sp.add_argument("--pi-out")
    sp.set_defaults(func=cmd_solve)

    sp = with_instance("worst", "worst optimal value over all scenarios")
    sp.add_argument("--method", choices=("brute", "sp"), default="brute")
    sp.add_argument("--sptree", help="decomposition expression, e.g. 'S(0,P(1,2))'")
    sp.add_argument("-o", "--scenario-out")
    sp.add_argument("--flow-out")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_worst)

    sp = with_instance("extremalize", "push interior capacities to bounds until they form a forest")
    sp.add_argument("--scenario", required=True)
    sp.add_argument("--flow", required=True)
    sp.add_argument("-o", "--scenario-out")
    sp.add_argument("--flow-out")
    sp.set_defaults(func=cmd_extremalize)

    sp = with_instance("paradox", "worst-value profile and more-for-less detection")
    sp.add_argument("--fmax", type=int)
    sp.set_defaults(func=cmd_paradox)

    sp = sub.add_parser("immune", parents=[common], help="immunity test for complete digraph costs")
    sp.add_argument("--complete", type=int, required=True, metavar="N")
    sp.add_argument("--costs", required=True, help="N rows of N integers (diagonal ignored)")
    sp.add_argument("--source", type=int, default=1)
    sp.add_argument("--sink", type=int)
    sp.add_argument("--instance-out", help="write a paradox instance when not immune")
    sp.set_defaults(func=cmd_immune)

    sp = with_instance("emit-milp", "write the big-M model in LP format")
    sp.add_argument("--tighten", action="store_true")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_emit_milp)

    sp = with_instance("certify", "check a flow against node potentials")
    sp.add_argument("--scenario", required=True)
    sp.add_argument("--flow", required=True)
    sp.add_argument("--pi", required=True)
    sp.set_defaults(func=cmd_certify)

    gp = sub.add_parser("gen", help="write a generated instance")
    gsub = gp.add_subparsers(dest="family", required=True)
    g = gsub.add_parser("knapsack", parents=[common])
    g.add_argument("--b", type=int, required=True)
    g.add_argument("--weights", required=True, help="comma separated")
    g.add_argument("--values", required=True, help="comma separated")
    g = gsub.add_parser("chain", parents=[common])
    g.add_argument("--n", type=int, required=True)
    gsub.add_parser("paradox-simple", parents=[common])
    gsub.add_parser("paradox-complex", parents=[common])
    g = gsub.add_parser("cut", parents=[common])
    g.add_argument("--n", type=int, required=True)
    for name in ("random", "random-sp"):
        g = gsub.add_parser(name, parents=[common])
        if name == "random":
            g.add_argument("--n", type=int, required=True)
        g.add_argument("--m", type=int, required=True)
        g.add_argument("--cap", type=int, default=3)
        g.add_argument("--cost", type=int, default=9)
        g.add_argument("--f", type=int, default=1)
        g.add_argument("--seed", type=int, default=0)
    for g in gsub.choices.values():
        g.add_argument("-o", "--output")
    gp.set_defaults(func=cmd_gen)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    out = _Out(getattr(args, "quiet", False))
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"error: {exc} (raise IFLOW_BUDGET to allow it)", file=sys.stderr)
        return EXIT_BUDGET
    except (instance_io.FormatError, InconsistentInputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
