"""Command-line surface: validate knowledge bases, run scenarios, query.

Exit codes:
  check: 0 no errors (warnings allowed), 2 any error-level diagnostic
  run:   0 all expectations pass, 1 any FAIL, 2 parse error, 3 resource limit
  query: 0 at least one live answer, 1 none, 2 parse error, 3 resource limit

Diagnostics go to stderr, results to stdout. There is no environment
configuration; everything is a flag.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .engine import Engine, EngineLimits, LimitExceeded, run_scenario
from .kb import (
    Diagnostic,
    KnowledgeBase,
    Scenario,
    has_errors,
    lint_kb,
    parse_kb_texts,
    parse_prop_text,
    parse_scenario,
)
from .terms import prop_text, term_text, vars_of
from .trace import TRACE_FORMATS, render_trace


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pretence",
        description="Defeasible inference over nested metaphor-pretence spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="parse and lint knowledge bases")
    p_check.add_argument("kb", nargs="+", help="knowledge base files (.kb)")

    p_run = sub.add_parser("run", help="run a scenario and report expectations")
    p_run.add_argument("scenario", help="scenario file (.scn)")
    p_run.add_argument(
        "--kb", action="append", required=True,
        help="knowledge base file; repeat to layer several in order",
    )
    p_run.add_argument("--trace", choices=TRACE_FORMATS, help="emit the derivation trace")
    p_run.add_argument("--max-rounds", type=int, default=None)
    p_run.add_argument("--max-depth", type=int, default=None)
    p_run.add_argument("--out", help="write the trace here instead of stdout")

    p_query = sub.add_parser("query", help="prove a goal against a scenario")
    p_query.add_argument("scenario", help="scenario file (.scn)")
    p_query.add_argument(
        "--kb", action="append", required=True,
        help="knowledge base file; repeat to layer several in order",
    )
    p_query.add_argument("--goal", required=True, help="goal proposition pattern")
    p_query.add_argument("--max-rounds", type=int, default=None)
    p_query.add_argument("--max-depth", type=int, default=None)
    return parser


def _print_diagnostics(diagnostics: Sequence[Diagnostic]) -> None:
    for d in diagnostics:
        print(d.render(), file=sys.stderr)


def _read_files(paths: Sequence[str]) -> tuple[Optional[list[tuple[str, str]]], list[Diagnostic]]:
    texts: list[tuple[str, str]] = []
    diagnostics: list[Diagnostic] = []
    for path in paths:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                texts.append((handle.read(), path))
        except OSError as exc:
            diagnostics.append(Diagnostic("error", "E-IO", str(exc), path))
    if has_errors(diagnostics):
        return None, diagnostics
    return texts, diagnostics


def _load_kb(paths: Sequence[str]) -> tuple[Optional[KnowledgeBase], list[Diagnostic]]:
    texts, diagnostics = _read_files(paths)
    if texts is None:
        return None, diagnostics
    kb, more = parse_kb_texts(texts)
    return kb, diagnostics + more


def _load_scenario(path: str, kb: KnowledgeBase) -> tuple[Optional[Scenario], list[Diagnostic]]:
    texts, diagnostics = _read_files([path])
    if texts is None:
        return None, diagnostics
    text, filename = texts[0]
    scenario, more = parse_scenario(text, kb, filename)
    return scenario, diagnostics + more


def _limits(args) -> EngineLimits:
    overrides = {}
    if getattr(args, "max_rounds", None) is not None:
        overrides["max_rounds"] = args.max_rounds
    if getattr(args, "max_depth", None) is not None:
        overrides["max_term_depth"] = args.max_depth
    return EngineLimits(**overrides)


def cmd_check(args) -> int:
    kb, diagnostics = _load_kb(args.kb)
    if kb is not None:
        diagnostics = diagnostics + lint_kb(kb)
    _print_diagnostics(diagnostics)
    return 2 if has_errors(diagnostics) else 0


def cmd_run(args) -> int:
    kb, diagnostics = _load_kb(args.kb)
    if kb is None:
        _print_diagnostics(diagnostics)
        return 2
    scenario, scn_diags = _load_scenario(args.scenario, kb)
    _print_diagnostics(diagnostics + scn_diags)
    if scenario is None:
        return 2
    try:
        result = run_scenario(kb, scenario, _limits(args))
    except (LimitExceeded, ValueError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    for v in result.verdicts:
        status = "PASS" if v.passed else "FAIL"
        found = v.found.keyword if v.found is not None else "absent"
        print(
            f"{status} {v.space} {prop_text(v.prop)} required={v.required.keyword} found={found}"
        )
    print(f"conflicts: {result.conflicts}")
    if args.trace:
        rendered = render_trace(result.trace, args.trace)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(rendered)
        else:
            sys.stdout.write(rendered)
    return 0 if result.all_passed() else 1


def cmd_query(args) -> int:
    kb, diagnostics = _load_kb(args.kb)
    if kb is None:
        _print_diagnostics(diagnostics)
        return 2
    scenario, scn_diags = _load_scenario(args.scenario, kb)
    goal, goal_diags = parse_prop_text(args.goal)
    _print_diagnostics(diagnostics + scn_diags + goal_diags)
    if scenario is None or goal is None:
        return 2
    try:
        engine = Engine(kb, _limits(args))
        engine.run(scenario)
        answers = engine.prove(goal)
    except (LimitExceeded, ValueError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    goal_vars = []
    for v in vars_of(goal):
        if v not in goal_vars:
            goal_vars.append(v)
    live = 0
    for answer in answers:
        if answer.bindings.bindings:
            shown = " ".join(
                f"?{v.name}={term_text(t)}" for v, t in answer.bindings.bindings.items()
            )
        else:
            shown = "{}"
        suffix = " defeated" if answer.defeated else ""
        print(f"{shown} certainty={answer.certainty.keyword}{suffix}")
        if not answer.defeated:
            live += 1
    return 0 if live else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check":
        return cmd_check(args)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "query":
        return cmd_query(args)
    raise AssertionError(f"unhandled command {args.command!r}")


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
