"""Concrete probabilistic domain: finite value sets with a correctness bound.

An element <S, p> records that a variable's value is drawn from the finite set
S and is correct (untouched by any hardware fault so far) with probability at
least p. Elements are ordered by

    <S1, p1>  <=  <S2, p2>   iff   S1 is a subset of S2  and  p1 >= p2

so "up" means less information: more candidate values, weaker guarantee. The
least element is <{}, 1> and the greatest <full range, 0>. The least upper
bound unions the sets and keeps the smaller probability; the greatest lower
bound intersects and keeps the larger one (an empty intersection keeps
max(p1, p2), which is exactly the greatest lower bound under the order above).

A program state maps every variable to an element. The strongest-postcondition
transfers enumerate tuples of operand values, so they are exact but only
viable on small sets; `cap` bounds the tuple product and OracleBlowup reports
programs that exceed it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .hardware import HardwareSpec, c_div, c_mod
from .syntax import BinOp, Cmp, Const, Expr, Var, expr_vars, walk_exprs

DEFAULT_TUPLE_CAP = 10**6


class OracleBlowup(Exception):
    """The tuple product of an sp transfer would exceed the configured cap."""


class EvalError(Exception):
    """Division or modulo by zero while evaluating one operand tuple."""


@dataclass(frozen=True)
class ValueSet:
    values: frozenset[int]
    prob: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.prob <= 1.0:
            raise ValueError(f"probability out of [0,1]: {self.prob}")

    @classmethod
    def bottom(cls) -> ValueSet:
        return cls(frozenset(), 1.0)

    @classmethod
    def top(cls, minint: int, maxint: int) -> ValueSet:
        return cls(frozenset(range(minint, maxint + 1)), 0.0)

    @classmethod
    def of(cls, *values: int, prob: float = 1.0) -> ValueSet:
        return cls(frozenset(values), prob)

    @property
    def is_bottom(self) -> bool:
        return not self.values and self.prob == 1.0

    def leq(self, other: ValueSet) -> bool:
        return self.values <= other.values and self.prob >= other.prob - 1e-12

    def join(self, other: ValueSet) -> ValueSet:
        return ValueSet(self.values | other.values, min(self.prob, other.prob))

    def meet(self, other: ValueSet) -> ValueSet:
        return ValueSet(self.values & other.values, max(self.prob, other.prob))


# A state maps every program variable to an element. The bottom state (no
# reachable environment) is canonically the all-bottom map, so it is the
# identity of state joins.

State = dict[str, ValueSet]


def bottom_state(variables: tuple[str, ...]) -> State:
    return {v: ValueSet.bottom() for v in variables}


def entry_state(variables: tuple[str, ...], spec: HardwareSpec) -> State:
    return {v: ValueSet(frozenset(range(spec.minint, spec.maxint + 1)), 1.0)
            for v in variables}


def state_is_bottom(state: State) -> bool:
    return any(not e.values for e in state.values())


def join_states(a: State, b: State) -> State:
    return {v: a[v].join(b[v]) for v in a}


def leq_states(a: State, b: State) -> bool:
    if state_is_bottom(a):
        return True
    return all(a[v].leq(b[v]) for v in a)


def value_part(state: State) -> tuple:
    """The probability-free projection used to detect value changes."""
    if state_is_bottom(state):
        return ()
    return tuple(sorted((v, e.values) for v, e in state.items()))


def _eval(e: Expr, env: dict[str, int], spec: HardwareSpec, warnings: list[str]) -> int:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    lhs = _eval(e.lhs, env, spec, warnings)
    rhs = _eval(e.rhs, env, spec, warnings)
    if e.op == "add":
        raw = lhs + rhs
    elif e.op == "sub":
        raw = lhs - rhs
    elif e.op == "mul":
        raw = lhs * rhs
    elif e.op == "div":
        if rhs == 0:
            raise EvalError(f"line {e.line}: division by zero")
        raw = c_div(lhs, rhs)
    else:
        if rhs == 0:
            raise EvalError(f"line {e.line}: modulo by zero")
        raw = c_mod(lhs, rhs)
    clamped = spec.clamp(raw)
    if clamped != raw:
        _warn(warnings, f"line {e.line}: arithmetic overflow clamped to "
                        f"[{spec.minint},{spec.maxint}]")
    return clamped


def _warn(warnings: list[str], message: str) -> None:
    if message not in warnings:
        warnings.append(message)


def _tuple_space(state: State, variables: tuple[str, ...], cap: int) -> None:
    total = 1
    for v in variables:
        total *= len(state[v].values)
        if total > cap:
            raise OracleBlowup(
                f"tuple product over {variables} exceeds cap {cap}")


def _op_rels(root, spec: HardwareSpec) -> float:
    rel = 1.0
    for node in walk_exprs(root):
        if isinstance(node, BinOp):
            rel *= spec.rel(node.op)
    return rel


def sp_assign(state: State, target: str, expr: Expr, spec: HardwareSpec,
              warnings: list[str], cap: int = DEFAULT_TUPLE_CAP) -> State:
    """Strongest postcondition of `target =. expr`.

    The result set is the image of expr over every tuple of operand values;
    the probability charges one write, one read per distinct variable, each
    variable's own probability, and one factor per arithmetic op. Tuples that
    divide by zero produce no value and are reported; if every tuple does, the
    state has no reachable environment and becomes bottom.
    """
    if state_is_bottom(state):
        return state
    variables = expr_vars(expr)
    _tuple_space(state, variables, cap)
    domains = [sorted(state[v].values) for v in variables]
    values = set()
    had_eval_error = False
    for tup in itertools.product(*domains):
        env = dict(zip(variables, tup))
        try:
            values.add(_eval(expr, env, spec, warnings))
        except EvalError as exc:
            had_eval_error = True
            _warn(warnings, f"{exc} (offending operand tuple excluded)")
    if not values:
        if had_eval_error:
            _warn(warnings, f"every operand tuple of `{target} =. ...` divides "
                            f"by zero; state is unreachable")
        return bottom_state(tuple(state))
    prob = spec.rel("write") * spec.rel("read") ** len(variables) * _op_rels(expr, spec)
    for v in variables:
        prob *= state[v].prob
    out = dict(state)
    out[target] = ValueSet(frozenset(values), min(1.0, prob))
    return out


def sp_guard(state: State, guard: Cmp, spec: HardwareSpec,
             warnings: list[str], cap: int = DEFAULT_TUPLE_CAP) -> State:
    """Strongest postcondition of passing a comparison guard.

    Each guard variable keeps only the values that occur in some satisfying
    tuple; every variable's probability (guard-related or not) picks up one
    read per distinct guard variable, the comparison's factor, and a factor
    per arithmetic op inside the guard. An unsatisfiable guard bottoms the
    whole state.
    """
    if state_is_bottom(state):
        return state
    variables = expr_vars(guard)
    _tuple_space(state, variables, cap)
    domains = [sorted(state[v].values) for v in variables]
    keep: dict[str, set[int]] = {v: set() for v in variables}
    for tup in itertools.product(*domains):
        env = dict(zip(variables, tup))
        try:
            lhs = _eval(guard.lhs, env, spec, warnings)
            rhs = _eval(guard.rhs, env, spec, warnings)
        except EvalError as exc:
            _warn(warnings, f"{exc} (offending operand tuple excluded)")
            continue
        if _compare(guard.op, lhs, rhs):
            for v, value in zip(variables, tup):
                keep[v].add(value)
    if variables and not any(keep.values()):
        return bottom_state(tuple(state))
    if not variables:
        # constant guard: no tuples to filter, truth decided outright
        try:
            lhs = _eval(guard.lhs, {}, spec, warnings)
            rhs = _eval(guard.rhs, {}, spec, warnings)
        except EvalError as exc:
            _warn(warnings, f"{exc} (constant guard unreachable)")
            return bottom_state(tuple(state))
        if not _compare(guard.op, lhs, rhs):
            return bottom_state(tuple(state))
    factor = (spec.rel("read") ** len(variables) * spec.rel(guard.op)
              * _op_rels(guard.lhs, spec) * _op_rels(guard.rhs, spec))
    out: State = {}
    for v, e in state.items():
        values = frozenset(keep[v]) if v in keep else e.values
        out[v] = ValueSet(values, min(1.0, e.prob * factor))
    return out


def _compare(op: str, lhs: int, rhs: int) -> bool:
    if op == "lt":
        return lhs < rhs
    if op == "le":
        return lhs <= rhs
    if op == "gt":
        return lhs > rhs
    if op == "ge":
        return lhs >= rhs
    if op == "eq":
        return lhs == rhs
    return lhs != rhs
