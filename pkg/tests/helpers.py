"""Shared test utilities: corpus access, one-call analysis, random programs."""

from __future__ import annotations

import itertools
import random
from pathlib import Path

from probrange import build_cfg, build_equations, parse_program, solve
from probrange.hardware import c_div, c_mod

CORPUS = Path(__file__).parent / "corpus"


def corpus_source(name: str) -> str:
    return (CORPUS / name).read_text()


def analyze(source: str, spec, **kwargs):
    """Parse, build, and solve in one step; returns (cfg, SolveResult)."""
    cfg = build_cfg(parse_program(source))
    return cfg, solve(build_equations(cfg), spec, **kwargs)


def line_map(cfg) -> dict[int, int]:
    """Source line -> node id (corpus programs have unique node lines)."""
    return {cfg.lines[n]: n for n in range(cfg.node_count)}


def random_program(rng: random.Random, max_vars: int = 3,
                   max_stmts: int = 6) -> str:
    """A loop-free program: assignments and if/else over tiny constants.

    Shapes follow the soundness-suite profile: at most three variables, at
    most six statements, constants within [-4, 4]. Division and modulo are
    generated freely, so zero divisors and empty branches do occur.
    """
    names = sorted(rng.sample(("x", "y", "z"), rng.randint(1, max_vars)))
    lines: list[str] = []
    budget = rng.randint(1, max_stmts)
    while budget > 0:
        if budget >= 3 and rng.random() < 0.2:
            lines.append(f"if ({_guard(rng, names)}) {{")
            lines.append(f"  {_assign(rng, names)}")
            lines.append("} else {")
            lines.append(f"  {_assign(rng, names)}")
            lines.append("}")
            budget -= 3
        elif budget >= 2 and rng.random() < 0.25:
            lines.append(f"if ({_guard(rng, names)}) {{")
            lines.append(f"  {_assign(rng, names)}")
            lines.append("}")
            budget -= 2
        else:
            lines.append(_assign(rng, names))
            budget -= 1
    return "\n".join(lines) + "\n"


def _assign(rng: random.Random, names) -> str:
    return f"{rng.choice(names)} =. {_expr(rng, names, rng.choice((0, 1, 1, 2)))};"


def _expr(rng: random.Random, names, depth: int) -> str:
    if depth == 0:
        if rng.random() < 0.4:
            return str(rng.randint(-4, 4))
        return rng.choice(names)
    op = rng.choice(("+.", "-.", "*.", "/.", "%."))
    return f"({_expr(rng, names, depth - 1)} {op} {_expr(rng, names, depth - 1)})"


def _guard(rng: random.Random, names) -> str:
    if rng.random() < 0.3:
        mod = rng.randint(1, 4)
        cmp_op = rng.choice(("==.", "!=."))
        return f"{rng.choice(names)} %. {mod} {cmp_op} {rng.randint(-2, 2)}"
    cmp_op = rng.choice(("<.", "<=.", ">.", ">=.", "==.", "!=."))
    lhs = _expr(rng, names, rng.choice((0, 0, 1)))
    rhs = _expr(rng, names, rng.choice((0, 0, 1)))
    return f"{lhs} {cmp_op} {rhs}"


def product_sets(cfg, minint: int, maxint: int) -> dict[int, dict[str, set]]:
    """Per-variable value sets under fault-free product semantics.

    An independent mirror of the value half of the concrete transfers, written
    directly against the CFG: per node, each variable maps to the set of
    values it can hold, with guards projected per variable and assignments
    enumerated over operand tuples. Used to pin down the Pr=1 degenerate case.
    """
    variables = cfg.variables
    full = set(range(minint, maxint + 1))
    states = {n: {v: set() for v in variables} for n in range(cfg.node_count)}
    states[cfg.entry] = {v: set(full) for v in variables}
    preds = cfg.preds()

    def clamp(v):
        return max(minint, min(maxint, v))

    def eval_expr(e, env):
        from probrange.syntax import BinOp, Const, Var
        if isinstance(e, Const):
            return e.value
        if isinstance(e, Var):
            return env[e.name]
        a, b = eval_expr(e.lhs, env), eval_expr(e.rhs, env)
        if e.op == "add":
            return clamp(a + b)
        if e.op == "sub":
            return clamp(a - b)
        if e.op == "mul":
            return clamp(a * b)
        if b == 0:
            raise ZeroDivisionError
        return clamp(c_div(a, b) if e.op == "div" else c_mod(a, b))

    def transfer(state, action):
        from probrange.cfg import AssignAction
        from probrange.syntax import expr_vars
        if any(not s for s in state.values()):
            return {v: set() for v in variables}
        if isinstance(action, AssignAction):
            used = expr_vars(action.value)
            result = set()
            for tup in itertools.product(*(sorted(state[v]) for v in used)):
                try:
                    result.add(eval_expr(action.value, dict(zip(used, tup))))
                except ZeroDivisionError:
                    pass
            if not result:
                return {v: set() for v in variables}
            new = {v: set(s) for v, s in state.items()}
            new[action.target] = result
            return new
        guard = action.cond
        used = expr_vars(guard)
        keep = {v: set() for v in used}
        satisfied = False
        for tup in itertools.product(*(sorted(state[v]) for v in used)):
            env = dict(zip(used, tup))
            try:
                lhs, rhs = eval_expr(guard.lhs, env), eval_expr(guard.rhs, env)
            except ZeroDivisionError:
                continue
            ok = {"lt": lhs < rhs, "le": lhs <= rhs, "gt": lhs > rhs,
                  "ge": lhs >= rhs, "eq": lhs == rhs, "ne": lhs != rhs}[guard.op]
            if ok:
                satisfied = True
                for v, val in zip(used, tup):
                    keep[v].add(val)
        # a constant guard has no tuples to project but still decides truth
        if not any(keep.values()) and (used or not satisfied):
            return {v: set() for v in variables}
        return {v: set(keep[v]) if v in keep else set(s)
                for v, s in state.items()}

    for _ in range(cfg.node_count + 2):
        changed = False
        for node in range(cfg.node_count):
            if node == cfg.entry:
                continue
            new = {v: set() for v in variables}
            for edge in preds[node]:
                t = transfer(states[edge.src], edge.action)
                for v in variables:
                    new[v] |= t[v]
            if new != states[node]:
                states[node] = new
                changed = True
        if not changed:
            break
    return states
