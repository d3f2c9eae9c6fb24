"""Command-line driver: analyze one program file against one hardware spec.

Exit codes: 0 on success, 1 on input problems (unreadable files, spec or
parse errors, a concrete run exceeding its enumeration cap), 2 when the
solver hit the iteration bound without converging (the report is still
emitted, flagged as not converged).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .abstract import ValueRange
from .cfg import build_cfg, collect_thresholds
from .concrete import OracleBlowup, ValueSet
from .engine import build_equations, solve
from .hardware import ALL_OPS, HardwareSpec, SpecError, parse_spec
from .syntax import FrontendError, parse_program

SET_DISPLAY_LIMIT = 12


class _ArgumentParser(argparse.ArgumentParser):
    # reserve exit code 2 for non-convergence; flag mistakes are input errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="probrange",
        description="Range and reliability analysis for integer programs "
                    "on unreliable hardware.")
    parser.add_argument("program", help="program file to analyze")
    parser.add_argument("--spec", required=True,
                        help="hardware reliability spec file")
    parser.add_argument("--mode", choices=("concrete", "abstract"),
                        default="abstract", help="analysis domain")
    parser.add_argument("--widening", action="store_true",
                        help="widen loop heads toward program constants")
    parser.add_argument("--widen-all", action="store_true",
                        help="widen at every node, not just loop heads")
    parser.add_argument("--max-iters", type=int, default=20, metavar="N",
                        help="iteration bound (default 20)")
    parser.add_argument("--minint", type=int, help="override lower bound")
    parser.add_argument("--maxint", type=int, help="override upper bound")
    parser.add_argument("--format", choices=("text", "machine"),
                        default="text", help="report format")
    parser.add_argument("--trace", action="store_true",
                        help="include per-iteration states in the report")
    parser.add_argument("--out", metavar="PATH",
                        help="write the report to PATH instead of stdout")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.max_iters < 1:
        parser.error("--max-iters must be at least 1")
    if args.mode == "concrete" and (args.widening or args.widen_all):
        parser.error("widening applies to abstract mode only")

    try:
        source = Path(args.program).read_text()
    except OSError as exc:
        print(f"probrange: cannot read program: {exc}", file=sys.stderr)
        return 1
    try:
        spec_text = Path(args.spec).read_text()
    except OSError as exc:
        print(f"probrange: cannot read spec: {exc}", file=sys.stderr)
        return 1

    try:
        spec, warnings = parse_spec(spec_text)
        overrides = {}
        if args.minint is not None:
            overrides["minint"] = args.minint
        if args.maxint is not None:
            overrides["maxint"] = args.maxint
        if overrides:
            spec = dataclasses.replace(spec, **overrides)
    except SpecError as exc:
        print(f"probrange: spec error: {exc}", file=sys.stderr)
        return 1

    try:
        program = parse_program(source)
        cfg = build_cfg(program)
    except FrontendError as exc:
        print(f"probrange: {exc}", file=sys.stderr)
        return 1

    widening = None
    if args.widening or args.widen_all:
        widening = collect_thresholds(cfg, spec.minint, spec.maxint)
    system = build_equations(cfg)
    try:
        result = solve(system, spec, domain=args.mode, widening=widening,
                       max_iters=args.max_iters, widen_all=args.widen_all,
                       keep_trace=args.trace)
    except OracleBlowup as exc:
        print(f"probrange: {exc}", file=sys.stderr)
        return 1

    warnings.extend(result.warnings)
    name = program.name or Path(args.program).stem
    report = build_report(name, args.mode, widening is not None, spec,
                          cfg, result, warnings)
    rendered = (render_machine(report) if args.format == "machine"
                else render_text(report))
    if args.out:
        try:
            Path(args.out).write_text(rendered)
        except OSError as exc:
            print(f"probrange: cannot write report: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(rendered)
    return 0 if result.converged else 2


def build_report(name: str, mode: str, widening: bool, spec: HardwareSpec,
                 cfg, result, warnings: list[str]) -> dict:
    """Assemble the report as one plain dict; both renderers feed on it."""
    rows = []
    for node in sorted(result.states):
        state = result.states[node]
        for var in cfg.variables:
            rows.append(_row(node, cfg.lines[node], var, state[var]))
    report = {
        "program": name,
        "mode": mode,
        "widening": widening,
        "schedule": result.schedule,
        "spec": {
            "minint": spec.minint,
            "maxint": spec.maxint,
            "probabilities": {op: spec.prob(op) for op in ALL_OPS},
        },
        "iterations": result.iterations,
        "converged": result.converged,
        "warnings": list(warnings),
        "results": rows,
    }
    if result.trace is not None:
        report["trace"] = [
            {"iteration": i + 1,
             "rows": [_row(node, cfg.lines[node], var, snapshot[node][var])
                      for node in sorted(snapshot)
                      for var in cfg.variables]}
            for i, snapshot in enumerate(result.trace)]
    return report


def _row(node: int, line: int, var: str, element) -> dict:
    row = {"node": node, "line": line, "variable": var}
    if isinstance(element, ValueRange):
        row["interval"] = None if element.is_bottom else [element.lo, element.hi]
    else:
        row["values"] = sorted(element.values)
    row["probability"] = float(f"{element.prob:.12g}")
    return row


def _value_text(row: dict) -> str:
    if "interval" in row:
        if row["interval"] is None:
            return "[]"
        lo, hi = row["interval"]
        return f"[{lo},{hi}]"
    values = row["values"]
    if not values:
        return "{}"
    if len(values) <= SET_DISPLAY_LIMIT:
        return "{" + ",".join(str(v) for v in values) + "}"
    shown = ",".join(str(v) for v in values[:3])
    return f"{{{shown},...,{values[-1]}}} ({len(values)} values)"


def _spec_text(spec: dict) -> str:
    probs = set(spec["probabilities"].values())
    if len(probs) == 1:
        ops = f"all ops Pr={probs.pop():.12g}"
    else:
        ops = (f"op Pr in [{min(probs):.12g}, {max(probs):.12g}]")
    return f"{ops}, bounds [{spec['minint']},{spec['maxint']}]"


def _format_rows(rows: list[dict]) -> list[str]:
    header = ("line", "variable", "value", "probability")
    cells = [(str(r["line"]), r["variable"], _value_text(r),
              f"{r['probability']:.12g}") for r in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) if cells else len(h)
              for i, h in enumerate(header)]
    def fmt(cols):
        return " | ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()
    lines = [fmt(header), "-+-".join("-" * w for w in widths)]
    lines.extend(fmt(c) for c in cells)
    return lines


def render_text(report: dict) -> str:
    mode = report["mode"]
    if report["widening"]:
        mode += " with widening"
    status = "yes" if report["converged"] else "NO"
    lines = [
        f"program: {report['program']}",
        f"mode: {mode}",
        f"spec: {_spec_text(report['spec'])}",
        f"converged: {status} ({report['iterations']} iterations, "
        f"{report['schedule']})",
        "",
    ]
    lines.extend(_format_rows(report["results"]))
    if report["warnings"]:
        lines.append("")
        lines.append("warnings:")
        lines.extend(f"  - {w}" for w in report["warnings"])
    if "trace" in report:
        lines.append("")
        lines.append("trace:")
        for entry in report["trace"]:
            lines.append(f"  iteration {entry['iteration']}:")
            for row in entry["rows"]:
                lines.append(f"    line {row['line']}: {row['variable']} = "
                             f"{_value_text(row)} "
                             f"p={row['probability']:.12g}")
    lines.append("")
    return "\n".join(lines)


def render_machine(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
