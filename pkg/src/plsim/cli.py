"""Command-line front end.

Subcommands:
  run      evaluate a scenario and emit the exact outcome table (text or
           JSON), per-frame collapse histories, or a world-graph DOT file
  paradox  compare the certified facts of two or more frames and print the
           consistency verdict

Exit codes: 0 success, 2 configuration error, 3 post-selection with exactly
zero probability.  Numbers are printed as exact "p/q" / "p/q·√2" strings
unless --float is given.  Set PLSIM_COLOR=1 to colorize the verdict.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Sequence

from .amplitude import RootTwo
from .lives import ParadoxReport, perspective_compare, world_graph
from .scenario import (
    Frame,
    FrameOrderError,
    PostSelectError,
    Scenario,
    UnknownScenarioError,
    ZeroProbabilityError,
    load_scenario,
    run_collapse,
    run_unitary,
    sample_outcome,
    scenario_from_json,
    SCENARIOS,
)


class ConfigError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plsim",
        description="exact interferometer-pair simulator with parallel-lives "
        "world bookkeeping",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument(
            "--scenario", help=f"built-in scenario name: {', '.join(sorted(SCENARIOS))}"
        )
        group.add_argument("--scenario-file", help="path to a scenario JSON file")
        p.add_argument(
            "--frame",
            action="append",
            default=None,
            help="frame name (repeatable) or 'all'; default all",
        )
        p.add_argument(
            "--post-select",
            default=None,
            help="detector configuration, e.g. D+=1,D-=1",
        )

    run_p = sub.add_parser("run", help="evaluate a scenario")
    add_common(run_p)
    run_p.add_argument(
        "--output",
        choices=("table", "json", "dot"),
        default="table",
        help="artifact to emit (default table)",
    )
    run_p.add_argument(
        "--float",
        action="store_true",
        dest="as_float",
        help="render numbers as 15-significant-digit decimals instead of exact strings",
    )
    run_p.add_argument(
        "--seed",
        type=int,
        default=None,
        help="draw one demonstration sample from the outcome table with this seed",
    )

    par_p = sub.add_parser("paradox", help="compare frames' certified facts")
    add_common(par_p)
    return parser


def _load_scenario(args: argparse.Namespace) -> Scenario:
    if args.scenario is not None:
        try:
            return load_scenario(args.scenario)
        except UnknownScenarioError as exc:
            raise ConfigError(f"--scenario: {exc}") from None
    try:
        with open(args.scenario_file, encoding="utf-8") as fh:
            data = json.load(fh)
        return scenario_from_json(data)
    except OSError as exc:
        raise ConfigError(f"--scenario-file: {exc}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"--scenario-file: {exc}") from None


def _frame_aliases(name: str) -> set[str]:
    aliases = {name.lower()}
    if name.endswith("+"):
        aliases.add(f"{name[:-1].lower()}-plus")
    if name.endswith("-"):
        aliases.add(f"{name[:-1].lower()}-minus")
    return aliases


def _resolve_frames(scenario: Scenario, requested: Sequence[str] | None) -> list[Frame]:
    tokens = [t.lower() for t in (requested or ["all"])]
    if "all" in tokens:
        return list(scenario.frames)
    frames = []
    for token in tokens:
        for frame in scenario.frames:
            if token in _frame_aliases(frame.name):
                frames.append(frame)
                break
        else:
            known = ", ".join(f.name for f in scenario.frames)
            raise ConfigError(
                f"--frame: unknown frame {token!r} for scenario "
                f"{scenario.name!r} (known: {known}, or 'all')"
            )
    return frames


def _fmt(value: RootTwo, as_float: bool) -> str:
    return f"{float(value):.15g}" if as_float else str(value)


def _print_table(
    scenario: Scenario,
    frames: list[Frame],
    args: argparse.Namespace,
    out,
) -> None:
    _, table = run_unitary(scenario, frames[0])
    print(f"scenario: {scenario.name}", file=out)
    print(f"frames:   {', '.join(f.name for f in frames)}", file=out)
    print("outcome table (identical for every valid event ordering):", file=out)
    width = max(len(name) for name in table)
    for name, prob in table.items():
        print(f"  {name:<{width}} : {_fmt(prob, args.as_float)}", file=out)
    if args.seed is not None:
        sampled = sample_outcome(table, random.Random(args.seed))
        print(f"sample (seed={args.seed}): {sampled}", file=out)
    if args.post_select is not None:
        for frame in frames:
            history = run_collapse(scenario, frame, args.post_select)
            print(
                f"history, frame {frame.name}, post-selection "
                f"{args.post_select} (weight {_fmt(history.weight, args.as_float)}):",
                file=out,
            )
            for entry in history.entries:
                prob = (
                    _fmt(entry.probability, args.as_float)
                    if entry.probability is not None
                    else "-"
                )
                line = f"  {entry.event_id:<6} p={prob:<6} {entry.state}"
                if entry.facts:
                    facts = "; ".join(str(f) for f in sorted(entry.facts))
                    line += f"  [{facts}]"
                print(line, file=out)


def _json_obj(
    scenario: Scenario, frames: list[Frame], args: argparse.Namespace
) -> dict:
    final, table = run_unitary(scenario, frames[0])

    def num(value: RootTwo):
        return float(value) if args.as_float else str(value)

    obj: dict = {
        "scenario": scenario.name,
        "frames": [f.name for f in frames],
        "outcome_table": {name: num(prob) for name, prob in table.items()},
        "final_state": final.to_json_obj(),
    }
    if args.seed is not None:
        obj["sample"] = {
            "seed": args.seed,
            "outcome": sample_outcome(table, random.Random(args.seed)),
        }
    if args.post_select is not None:
        histories = {}
        for frame in frames:
            history = run_collapse(scenario, frame, args.post_select)
            histories[frame.name] = {
                "post_select": args.post_select,
                "weight": num(history.weight),
                "entries": [
                    {
                        "event": entry.event_id,
                        "probability": (
                            num(entry.probability)
                            if entry.probability is not None
                            else None
                        ),
                        "state": entry.state.to_json_obj(),
                        "facts": [str(f) for f in sorted(entry.facts)],
                    }
                    for entry in history.entries
                ],
            }
        obj["histories"] = histories
    return obj


def _cmd_run(args: argparse.Namespace, out) -> int:
    scenario = _load_scenario(args)
    frames = _resolve_frames(scenario, args.frame)
    if args.output == "dot":
        if len(frames) != 1:
            raise ConfigError("--frame: DOT output needs exactly one frame")
        if args.post_select is None:
            raise ConfigError("--post-select: DOT output needs a post-selection")
        graph = world_graph(scenario, frames[0], args.post_select)
        print(graph.to_dot(), end="", file=out)
        return 0
    if args.output == "json":
        print(json.dumps(_json_obj(scenario, frames, args), indent=2,
                         ensure_ascii=False), file=out)
        return 0
    _print_table(scenario, frames, args, out)
    return 0


def _colorize(report: ParadoxReport, text: str) -> str:
    if os.environ.get("PLSIM_COLOR") != "1":
        return text
    verdict = report.verdict_text()
    color = "\x1b[31m" if report.paradox else "\x1b[32m"
    return text.replace(verdict, f"{color}{verdict}\x1b[0m")


def _cmd_paradox(args: argparse.Namespace, out) -> int:
    scenario = _load_scenario(args)
    frames = _resolve_frames(scenario, args.frame)
    if len(frames) < 2:
        raise ConfigError("--frame: the comparison needs at least two frames")
    if args.post_select is None:
        raise ConfigError("--post-select: the comparison needs a post-selection")
    graphs = [world_graph(scenario, frame, args.post_select) for frame in frames]
    report = perspective_compare(graphs)
    print(_colorize(report, report.to_text()), file=out)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "run":
            return _cmd_run(args, out)
        return _cmd_paradox(args, out)
    except (ConfigError, PostSelectError, FrameOrderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ZeroProbabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
