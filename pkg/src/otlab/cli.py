"""Command-line front end.

Exit codes: 0 when the verdict holds (or the session converged), 1 when a
counterexample or divergence was found, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .simulator import (
    ExplosionGuard,
    MalformedScenario,
    RunOutcome,
    Scenario,
    builtin_scenarios,
    resolve_it,
    run_all_orders,
    run_scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from .synth import (
    classify_witness,
    coherence_filter,
    contradiction_core,
    prove_impossibility,
    strategy_as_it,
    synthesize_tp1,
    table_rows,
)
from .transform import CATALOG, ITFunction
from .verify import OperationDomain, check_tp1, check_tp2

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ScenarioLoadError(Exception):
    pass


class ParseError(ScenarioLoadError):
    """The scenario file is not valid JSON."""


class SchemaError(ScenarioLoadError):
    """The JSON does not describe a valid scenario."""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def load_scenario(path_or_name: str) -> Scenario:
    """A builtin scenario by name, or a scenario JSON file."""
    catalog = builtin_scenarios()
    if path_or_name in catalog:
        return catalog[path_or_name]
    path = Path(path_or_name)
    if not path.is_file():
        raise ScenarioLoadError(
            f"{path_or_name!r} is neither a builtin scenario ({', '.join(catalog)}) nor a file"
        )
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise SchemaError(f"{path}:1: top level must be an object")
    try:
        return scenario_from_dict(data)
    except MalformedScenario as exc:
        raise SchemaError(f"{path}: {exc}") from None


_synth_cache: list = []


def _coherent_strategies():
    if not _synth_cache:
        _synth_cache.extend(coherence_filter(synthesize_tp1(OperationDomain())))
    return _synth_cache


def resolve_it_name(name: str) -> ITFunction:
    if name in CATALOG:
        return CATALOG[name]
    if name.startswith("synth:"):
        strategies = _coherent_strategies()
        try:
            i = int(name.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad strategy index in {name!r}") from None
        if not 0 <= i < len(strategies):
            raise UsageError(f"strategy index must be in 0..{len(strategies) - 1}")
        return strategy_as_it(strategies[i], name)
    raise UsageError(f"unknown IT function {name!r}; choose from {', '.join(CATALOG)} or synth:<index>")


def _domain(args) -> OperationDomain:
    try:
        return OperationDomain(max_pos=args.max_pos, alphabet=args.alphabet, depth=args.depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _outcome_dict(out: RunOutcome) -> dict:
    return {
        "docs": {str(s): d for s, d in sorted(out.docs.items())},
        "converged": out.converged,
        "errors": {str(s): e for s, e in out.errors.items()},
        "unintegrated": {str(s): n for s, n in out.unintegrated.items()},
        "order": [list(o) for o in out.order],
    }


def _scenario_arg(args) -> str:
    name = args.scenario or args.scenario_pos
    if not name:
        raise UsageError("a scenario is required (name or path)")
    return name


def cmd_simulate(args) -> int:
    sc = load_scenario(_scenario_arg(args))
    it = resolve_it(sc, resolve_it_name(args.it) if args.it else None)
    if args.all_orders:
        outcomes = run_all_orders(sc, it)
        ok = all(o.converged for o in outcomes)
        lines = [f"scenario {sc.name} with {it.name}: {len(outcomes)} delivery orders"]
        lines += [f"  {o.order}: {o.summary()}" for o in outcomes]
        lines.append(f"all converged={str(ok).lower()}")
        payload = {
            "scenario": sc.name,
            "it": it.name,
            "all_converged": ok,
            "runs": [_outcome_dict(o) for o in outcomes],
        }
        _emit(args, payload, "\n".join(lines))
        return EXIT_OK if ok else EXIT_FAIL
    out = run_scenario(sc, it)
    lines = [f"scenario {sc.name} with {it.name}", out.summary()]
    for s, e in sorted(out.errors.items()):
        lines.append(f"site{s} error: {e}")
    payload = {"scenario": sc.name, "it": it.name, **_outcome_dict(out)}
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if out.converged else EXIT_FAIL


def _cmd_check(args, check) -> int:
    it = resolve_it_name(args.it or "sun")
    verdict = check(it, _domain(args))
    head = (
        f"{verdict.prop} for {it.name} on max_pos={verdict.domain.max_pos} "
        f"alphabet={verdict.domain.alphabet!r} depth={verdict.domain.depth}: "
        f"{'holds' if verdict.holds else 'fails'} "
        f"({verdict.checked} checked, {len(verdict.witnesses)} witnesses)"
    )
    shown = verdict.witnesses if args.limit == 0 else verdict.witnesses[: args.limit]
    lines = [head] + [f"  {w}" for w in shown]
    if len(shown) < len(verdict.witnesses):
        lines.append(f"  ... {len(verdict.witnesses) - len(shown)} more")
    _emit(args, verdict.to_dict(), "\n".join(lines))
    return EXIT_OK if verdict.holds else EXIT_FAIL


def cmd_synthesize(args) -> int:
    dom = _domain(args)
    if dom.depth:
        raise UsageError("synthesis works on fresh operations only (depth 0)")
    cs = synthesize_tp1(dom)
    strategies = coherence_filter(cs)
    report = prove_impossibility(strategies, dom)
    classification = {"scenario-1": 0, "scenario-2": 0, "other": 0}
    for r in report.results:
        for k, n in r.classification.items():
            classification[k] += n
    core_ok = all(
        not v["joint"] for s in strategies for v in contradiction_core(s).values()
    )
    satisfiable = not report.all_fail

    lines = [f"domain: {dom.describe()}", "TP1-admissible assignments per case group:"]
    for name, assignments in cs.admissible.items():
        shown = ", ".join("(" + " ".join(a.value for a in asg) + ")" for asg in assignments)
        lines.append(f"  {name}: {shown}")
    lines.append("table:")
    for row in table_rows(cs):
        lines.append("  {0} {1} [{2}] -> {3} | {4}".format(*row))
    lines.append(f"coherent strategies: {len(strategies)}")
    for i, r in enumerate(report.results):
        verdict = "holds" if r.holds else "fails"
        lines.append(f"  synth:{i} TP2 {verdict}, {r.witness_count} witnesses {r.classification}")
        if r.minimal is not None:
            lines.append(f"    least witness [{classify_witness(r.minimal)}]: {r.minimal}")
    lines.append(f"contradiction core holds: {'yes' if core_ok else 'no'}")
    lines.append(f"TP1∧TP2 satisfiable: {'yes' if satisfiable else 'no'}")

    payload = {
        "domain": dom.describe(),
        "tp1_admissible": cs.to_dict(),
        "coherent_strategies": [s.to_dict() for s in strategies],
        "tp2": {
            "all_fail": report.all_fail,
            "witnesses": [r.to_dict() for r in report.results],
            "classification": classification,
        },
        "contradiction_core": core_ok,
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if satisfiable else EXIT_FAIL


def cmd_scenarios(args) -> int:
    catalog = builtin_scenarios()
    name = args.scenario or args.scenario_pos
    if name:
        sc = load_scenario(name)
        print(json.dumps(scenario_to_dict(sc), indent=2))
        return EXIT_OK
    if args.format == "json":
        print(json.dumps({n: scenario_to_dict(sc) for n, sc in catalog.items()}, indent=2))
    else:
        for n, sc in catalog.items():
            print(f"{n}: {sc.sites} sites from {sc.initial!r}, it {sc.it_family}, {len(sc.generated())} operations")
    return EXIT_OK


def cmd_replay_all(args) -> int:
    runs = {}
    lines = []
    for name, sc in builtin_scenarios().items():
        it = resolve_it(sc, resolve_it_name(args.it) if args.it else None)
        out = run_scenario(sc, it)
        runs[name] = {"it": it.name, **_outcome_dict(out)}
        lines.append(f"{name} [{it.name}]: {out.summary()}")
    diverged = [n for n, r in runs.items() if not r["converged"]]
    lines.append(f"diverged: {len(diverged)} of {len(runs)}")
    _emit(args, {"runs": runs, "diverged": diverged}, "\n".join(lines))
    return EXIT_FAIL if diverged else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="otlab", description="Operational transformation workbench.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, domain=False):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--it", help="ellis, ressel, sun, suleiman, imine, identity or synth:<index>")
        if domain:
            sp.add_argument("--max-pos", type=int, default=3)
            sp.add_argument("--alphabet", default="abc")
            sp.add_argument("--depth", type=int, default=0)

    sp = sub.add_parser("simulate", help="run a scenario")
    common(sp)
    sp.add_argument("scenario_pos", nargs="?", metavar="SCENARIO")
    sp.add_argument("--scenario")
    sp.add_argument("--all-orders", action="store_true")
    sp.set_defaults(func=cmd_simulate)

    for name, check in (("check-tp1", check_tp1), ("check-tp2", check_tp2)):
        sp = sub.add_parser(name, help=f"exhaustively check {name[-3:].upper()}")
        common(sp, domain=True)
        sp.add_argument("--limit", type=int, default=20, help="witnesses to print, 0 for all")
        sp.set_defaults(func=lambda a, c=check: _cmd_check(a, c))

    sp = sub.add_parser("synthesize", help="search TP1 strategies and check them for TP2")
    common(sp, domain=True)
    sp.set_defaults(func=cmd_synthesize)

    sp = sub.add_parser("scenarios", help="list builtin scenarios or export one")
    common(sp)
    sp.add_argument("scenario_pos", nargs="?", metavar="SCENARIO")
    sp.add_argument("--scenario")
    sp.set_defaults(func=cmd_scenarios)

    sp = sub.add_parser("replay-all", help="run every builtin scenario")
    common(sp)
    sp.set_defaults(func=cmd_replay_all)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"otlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ScenarioLoadError, ExplosionGuard) as exc:
        print(f"otlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
