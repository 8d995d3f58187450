"""Command-line interface.

Verbs: solve, analyze, stability, scenario (list | run), generate, report.
Exit code is nonzero iff a scenario expectation fails (or an error occurs).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from stablemax.analysis import profile_system
from stablemax.fileformat import (
    load_instance,
    profile_to_doc,
    save_instance,
    stability_to_doc,
    trace_to_doc,
)
from stablemax.generators import FAMILIES, GeneratorSpec, generate
from stablemax.objectives import AdditiveObjective
from stablemax.report import emit_report
from stablemax.scenarios import ScenarioResult, list_scenarios, run_scenario
from stablemax.solvers import (
    LocalSearchConfig,
    exact_optimum,
    greedy,
    greedy_alpha,
    local_search,
)
from stablemax.stability import (
    additive_stability_threshold,
    submodular_stability_upper_bound,
)


def _coerce(value: str):
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        return value


def _parse_params(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise SystemExit(f"bad --param {pair!r}, expected key=value")
        key, value = pair.split("=", 1)
        out[key] = _coerce(value)
    return out


def _print_doc(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    if args.algorithm == "greedy":
        trace = greedy(instance.system, instance.objective, tie_break=args.seed if args.seed is not None else "lex")
        _print_doc(trace_to_doc(trace))
    elif args.algorithm == "greedy-alpha":
        trace = greedy_alpha(
            instance.system, instance.objective, Fraction(args.alpha), seed=args.seed or 0
        )
        _print_doc(trace_to_doc(trace))
    elif args.algorithm == "local-search":
        initial = args.initial
        if initial not in (None, "greedy-seeded", "empty-maximal"):
            initial = int(initial)
        cfg = LocalSearchConfig(
            remove_cap=args.p,
            add_cap=args.q,
            initial=initial if initial is not None else "greedy-seeded",
        )
        trace = local_search(instance.system, instance.objective, cfg)
        _print_doc(trace_to_doc(trace))
    else:  # exact
        opt = exact_optimum(instance.system, instance.objective)
        _print_doc(
            {
                "set": sorted(e for e in range(instance.system.ground_size) if (opt.subset >> e) & 1),
                "value": str(opt.value),
                "unique": opt.unique,
            }
        )
    return 0


def _cmd_analyze(args) -> int:
    instance = load_instance(args.instance)
    profile = profile_system(
        instance.system,
        include_hereditary=True if args.hereditary else None,
    )
    _print_doc(profile_to_doc(profile))
    return 0


def _cmd_stability(args) -> int:
    instance = load_instance(args.instance)
    if args.mode == "additive-exact":
        if not isinstance(instance.objective, AdditiveObjective):
            raise SystemExit("additive-exact mode needs an additive objective")
        report = additive_stability_threshold(instance.system, instance.objective)
    else:
        report = submodular_stability_upper_bound(instance.system, instance.objective)
    _print_doc(stability_to_doc(report))
    return 0


def _print_scenario_result(result: ScenarioResult) -> None:
    for claim in result.claims:
        status = "PASS" if claim.passed else "FAIL"
        line = f"[{status}] {result.scenario_id}: {claim.name}"
        if claim.passed:
            line += f" = {claim.actual}"
        else:
            line += f" expected {claim.expected}, got {claim.actual}"
        if claim.note:
            line += f"  ({claim.note})"
        print(line)
    verdict = "passed" if result.passed else "FAILED"
    print(f"scenario {result.scenario_id}: {verdict}")


def _cmd_scenario(args) -> int:
    if args.action == "list":
        for scenario in list_scenarios():
            print(f"{scenario.id:28s} {scenario.description}")
        return 0
    params = _parse_params(args.param)
    try:
        result = run_scenario(args.id, params, workers=args.workers)
    except KeyError:
        raise SystemExit(
            f"unknown scenario {args.id!r}; see `stablemax scenario list`"
        ) from None
    if args.json:
        from stablemax.report import report_doc

        _print_doc(report_doc([result]))
    else:
        _print_scenario_result(result)
    return 0 if result.passed else 1


def _cmd_generate(args) -> int:
    spec = GeneratorSpec(args.family, args.seed, _parse_params(args.param))
    instance = generate(spec)
    if args.output:
        save_instance(instance, args.output, name=f"{args.family}-{args.seed}")
        print(f"wrote {args.output}")
    else:
        from stablemax.fileformat import serialize_instance

        print(serialize_instance(instance), end="")
    return 0


QUICK_COUNTS = {
    "greedy-additive-recovery": 30,
    "greedy-submodular-recovery": 24,
    "alpha-oracle": 16,
    "ls-upper-bound": 16,
    "ls-recovery": 16,
    "ls-matroid-intersection": 16,
    "hereditary-equivalence": 20,
}


def _cmd_report(args) -> int:
    results = []
    for scenario in list_scenarios():
        params: dict = {}
        if args.quick and scenario.id in QUICK_COUNTS:
            params["count"] = QUICK_COUNTS[scenario.id]
        if scenario.id == "cardinality":
            for k in (2, 3):
                results.append(run_scenario(scenario.id, {"k": k}, workers=args.workers))
            continue
        results.append(run_scenario(scenario.id, params, workers=args.workers))
    doc = emit_report(results, args.out_dir, figures=not args.no_figures)
    failed = [s["id"] for s in doc["scenarios"] if not s["passed"]]
    print(f"report written to {args.out_dir}")
    for path in doc.get("figures", ()):
        print(f"figure: {path}")
    if failed:
        print(f"FAILED scenarios: {', '.join(failed)}")
        return 1
    print(f"all {len(results)} scenario runs passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stablemax",
        description="Exact solvers, structural analysis, and perturbation-stability "
        "certificates for constrained set-function maximization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run a solver on an instance file")
    p_solve.add_argument("--instance", required=True)
    p_solve.add_argument(
        "--algorithm",
        choices=("greedy", "greedy-alpha", "local-search", "exact"),
        default="greedy",
    )
    p_solve.add_argument("--p", type=int, default=1, help="local-search removals per swap")
    p_solve.add_argument("--q", type=int, default=1, help="local-search additions per swap")
    p_solve.add_argument("--alpha", default="1", help="oracle quality for greedy-alpha")
    p_solve.add_argument("--seed", type=int, default=None)
    p_solve.add_argument("--initial", default=None, help="local-search start: greedy-seeded, empty-maximal, or a bitmask")
    p_solve.set_defaults(func=_cmd_solve)

    p_analyze = sub.add_parser("analyze", help="structural profile of an instance's system")
    p_analyze.add_argument("--instance", required=True)
    p_analyze.add_argument("--hereditary", action="store_true", help="force the hereditary parameter")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_stab = sub.add_parser("stability", help="stability threshold or certificate bound")
    p_stab.add_argument("--instance", required=True)
    p_stab.add_argument("--mode", choices=("additive-exact", "certificate"), default="additive-exact")
    p_stab.set_defaults(func=_cmd_stability)

    p_scen = sub.add_parser("scenario", help="list or run registered scenarios")
    p_scen.add_argument("action", choices=("list", "run"))
    p_scen.add_argument("id", nargs="?")
    p_scen.add_argument("--param", action="append", help="override, e.g. --param epsilon=1/10")
    p_scen.add_argument("--workers", type=int, default=1)
    p_scen.add_argument("--json", action="store_true")
    p_scen.set_defaults(func=_cmd_scenario)

    p_gen = sub.add_parser("generate", help="deterministically generate an instance")
    p_gen.add_argument("--family", choices=FAMILIES, required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--param", action="append")
    p_gen.add_argument("-o", "--output", default=None)
    p_gen.set_defaults(func=_cmd_generate)

    p_rep = sub.add_parser("report", help="run the scenario registry and emit the summary report")
    p_rep.add_argument("--out-dir", default="reports")
    p_rep.add_argument("--quick", action="store_true", help="reduced sweep sizes")
    p_rep.add_argument("--workers", type=int, default=1)
    p_rep.add_argument("--no-figures", action="store_true")
    p_rep.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "scenario" and args.action == "run" and not args.id:
        parser.error("scenario run requires an id")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
