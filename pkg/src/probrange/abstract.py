"""Interval domain with a correctness bound, and threshold widening.

An element <[a,b], p> says the variable's value lies in [a,b] and that the
whole interval carries correctness probability p, spread uniformly: each value
is correct with density pmf = p / (b-a+1). Elements are ordered by interval
containment together with density:

    <[a,b], p>  <=  <[c,d], q>   iff  [a,b] within [c,d]  and  pmf >= pmf'

(the density comparison uses a small absolute tolerance so that chained joins
of equal densities stay reflexive). The least element is the empty interval
with probability 1; the greatest is the full machine range with probability 0.

Joins take the hull and the smaller density, capped at the uniform density of
the hull; meets intersect and take the larger density, capped at total mass 1.
The cap in the meet cannot fire for elements whose mass is at most 1, so when
it does fire the event is reported through `warnings.warn`.

The connection to the concrete domain: abstraction maps <S, p> to the hull of
S carrying mass min(1, p * hull width); concretization maps <[a,b], p> back to
the full value set at density p / (b-a+1). Abstraction after concretization is
the identity.

Transfers mirror the concrete ones on interval endpoints. Division or modulo
by an interval containing zero widens the target to the full machine range
and reports it rather than failing; comparison guards refine the tested
variable's interval when one side is a lone variable (or `var %. k` against a
constant) and the other side folds to a constant.
"""

from __future__ import annotations

import warnings as _warnings
from dataclasses import dataclass

from .hardware import HardwareSpec, c_div, c_mod
from .syntax import BinOp, Cmp, Const, Expr, Var, expr_vars, walk_exprs
from .concrete import ValueSet

PMF_TOLERANCE = 1e-12


class BottomArgument(Exception):
    """The density of the empty interval was requested."""


@dataclass(frozen=True)
class ValueRange:
    lo: int
    hi: int
    prob: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.prob <= 1.0:
            raise ValueError(f"probability out of [0,1]: {self.prob}")
        if self.lo > self.hi and (self.lo, self.hi, self.prob) != (0, -1, 1.0):
            raise ValueError("empty interval must be the canonical bottom <[0,-1], 1>")

    @classmethod
    def bottom(cls) -> ValueRange:
        return cls(0, -1, 1.0)

    @classmethod
    def top(cls, minint: int, maxint: int) -> ValueRange:
        return cls(minint, maxint, 0.0)

    @property
    def is_bottom(self) -> bool:
        return self.lo > self.hi

    @property
    def width(self) -> int:
        return 0 if self.is_bottom else self.hi - self.lo + 1

    def pmf(self) -> float:
        if self.is_bottom:
            raise BottomArgument("empty interval has no density")
        return self.prob / self.width

    def leq(self, other: ValueRange) -> bool:
        if self.is_bottom:
            return True
        if other.is_bottom:
            return False
        return (other.lo <= self.lo and self.hi <= other.hi
                and self.pmf() >= other.pmf() - PMF_TOLERANCE)

    def join(self, other: ValueRange) -> ValueRange:
        if self.is_bottom:
            return other
        if other.is_bottom:
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        w = hi - lo + 1
        p = w * min(self.pmf(), other.pmf(), 1.0 / w)
        return ValueRange(lo, hi, min(1.0, p))

    def meet(self, other: ValueRange) -> ValueRange:
        if self.is_bottom or other.is_bottom:
            return ValueRange.bottom()
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return ValueRange.bottom()
        w = hi - lo + 1
        p = w * max(self.pmf(), other.pmf())
        if p > 1.0:
            _warnings.warn(
                f"meet of <[{self.lo},{self.hi}],{self.prob}> and "
                f"<[{other.lo},{other.hi}],{other.prob}> capped at mass 1",
                RuntimeWarning, stacklevel=2)
            p = 1.0
        return ValueRange(lo, hi, p)

    def widen(self, other: ValueRange, thresholds: tuple[int, ...]) -> ValueRange:
        """Jump both endpoints outward to thresholds bracketing the hull.

        Identity on a bottom side; returns self unchanged when other leq self.
        The result's mass is the hull width times the larger of the two
        densities, capped at 1.
        """
        if self.is_bottom:
            return other
        if other.is_bottom or other.leq(self):
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        wlo = max(t for t in thresholds if t <= lo)
        whi = min(t for t in thresholds if t >= hi)
        w = whi - wlo + 1
        p = w * min(max(self.pmf(), other.pmf()), 1.0 / w)
        return ValueRange(wlo, whi, min(1.0, p))


def alpha(c: ValueSet) -> ValueRange:
    if not c.values:
        return ValueRange.bottom()
    lo, hi = min(c.values), max(c.values)
    return ValueRange(lo, hi, min(1.0, c.prob * (hi - lo + 1)))


def gamma(m: ValueRange) -> ValueSet:
    if m.is_bottom:
        return ValueSet.bottom()
    return ValueSet(frozenset(range(m.lo, m.hi + 1)), m.pmf())


State = dict[str, ValueRange]


def bottom_state(variables: tuple[str, ...]) -> State:
    return {v: ValueRange.bottom() for v in variables}


def entry_state(variables: tuple[str, ...], spec: HardwareSpec) -> State:
    return {v: ValueRange(spec.minint, spec.maxint, 1.0) for v in variables}


def state_is_bottom(state: State) -> bool:
    return any(e.is_bottom for e in state.values())


def join_states(a: State, b: State) -> State:
    return {v: a[v].join(b[v]) for v in a}


def leq_states(a: State, b: State) -> bool:
    if state_is_bottom(a):
        return True
    if state_is_bottom(b):
        return False
    return all(a[v].leq(b[v]) for v in a)


def widen_states(a: State, b: State, thresholds: tuple[int, ...]) -> State:
    return {v: a[v].widen(b[v], thresholds) for v in a}


def value_part(state: State) -> tuple:
    if state_is_bottom(state):
        return ()
    return tuple(sorted((v, e.lo, e.hi) for v, e in state.items()))


def _warn(warnings: list[str], message: str) -> None:
    if message not in warnings:
        warnings.append(message)


def _clamp_interval(lo: int, hi: int, spec: HardwareSpec,
                    warnings: list[str], line: int) -> tuple[int, int]:
    # clamp each endpoint into the range: saturation maps every value of an
    # interval lying wholly outside onto the nearer bound, never to nothing
    clo = min(max(lo, spec.minint), spec.maxint)
    chi = min(max(hi, spec.minint), spec.maxint)
    if (clo, chi) != (lo, hi):
        _warn(warnings, f"line {line}: interval arithmetic overflow clamped "
                        f"to [{spec.minint},{spec.maxint}]")
    return clo, chi


def eval_interval(e: Expr, state: State, spec: HardwareSpec,
                  warnings: list[str]) -> tuple[int, int]:
    """Endpoint evaluation of an arithmetic expression over interval operands."""
    if isinstance(e, Const):
        return e.value, e.value
    if isinstance(e, Var):
        elem = state[e.name]
        return elem.lo, elem.hi
    a, b = eval_interval(e.lhs, state, spec, warnings)
    c, d = eval_interval(e.rhs, state, spec, warnings)
    if e.op == "add":
        lo, hi = a + c, b + d
    elif e.op == "sub":
        lo, hi = a - d, b - c
    elif e.op == "mul":
        corners = (a * c, a * d, b * c, b * d)
        lo, hi = min(corners), max(corners)
    elif e.op == "div":
        if c <= 0 <= d:
            _warn(warnings, f"line {e.line}: divisor interval [{c},{d}] "
                            f"contains zero; result widened to full range")
            return spec.minint, spec.maxint
        corners = (c_div(a, c), c_div(a, d), c_div(b, c), c_div(b, d))
        lo, hi = min(corners), max(corners)
    else:
        lo, hi = _mod_interval(a, b, c, d, e.line, spec, warnings)
    return _clamp_interval(lo, hi, spec, warnings, e.line)


def _mod_interval(a: int, b: int, c: int, d: int, line: int,
                  spec: HardwareSpec, warnings: list[str]) -> tuple[int, int]:
    if c <= 0 <= d:
        _warn(warnings, f"line {line}: modulus interval [{c},{d}] contains "
                        f"zero; result widened to full range")
        return spec.minint, spec.maxint
    if c == d:
        k = abs(c)
        if b - a + 1 >= k:
            return (-(k - 1), k - 1) if a < 0 else (0, k - 1)
        residues = [c_mod(v, k) for v in range(a, b + 1)]
        return min(residues), max(residues)
    k = max(abs(c), abs(d))
    lo = 0 if a >= 0 else max(a, -(k - 1))
    hi = 0 if b <= 0 else min(b, k - 1)
    return lo, hi


def sp_assign(state: State, target: str, expr: Expr, spec: HardwareSpec,
              warnings: list[str]) -> State:
    """Interval counterpart of the assignment transfer.

    The result interval comes from endpoint evaluation; its mass charges one
    write, one read per distinct variable, each operand's density, a factor
    per arithmetic op, and the result width (density times width is mass).
    """
    if state_is_bottom(state):
        return state
    variables = expr_vars(expr)
    lo, hi = eval_interval(expr, state, spec, warnings)
    prob = spec.rel("write") * spec.rel("read") ** len(variables) * _op_rels(expr, spec)
    for v in variables:
        prob *= state[v].pmf()
    prob *= hi - lo + 1
    out = dict(state)
    out[target] = ValueRange(lo, hi, min(1.0, prob))
    return out


def _op_rels(root, spec: HardwareSpec) -> float:
    rel = 1.0
    for node in walk_exprs(root):
        if isinstance(node, BinOp):
            rel *= spec.rel(node.op)
    return rel


def _fold_const(e: Expr) -> int | None:
    """Evaluate a variable-free expression, or None if variables occur.

    Raises EvalError-free: division by a zero constant yields None so the
    caller falls back to the non-refining transfer.
    """
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return None
    lhs = _fold_const(e.lhs)
    rhs = _fold_const(e.rhs)
    if lhs is None or rhs is None:
        return None
    if e.op == "add":
        return lhs + rhs
    if e.op == "sub":
        return lhs - rhs
    if e.op == "mul":
        return lhs * rhs
    if rhs == 0:
        return None
    return c_div(lhs, rhs) if e.op == "div" else c_mod(lhs, rhs)


_FLIP = {"lt": "gt", "le": "ge", "gt": "lt", "ge": "le", "eq": "eq", "ne": "ne"}


def sp_guard(state: State, guard: Cmp, spec: HardwareSpec,
             warnings: list[str]) -> State:
    """Interval counterpart of the guard transfer.

    Refinable shapes, after constant folding and putting the variable on the
    left: `x <op> c` truncates x's interval at c, and `x %. k ==. c` (or !=.)
    shrinks x's endpoints to the nearest values satisfying the congruence. The
    refined variable's probability scales by the width ratio; every variable's
    probability then picks up the guard's read, comparison, and arithmetic
    factors. Anything else leaves all intervals unchanged. An unsatisfiable
    guard bottoms the whole state.
    """
    if state_is_bottom(state):
        return state
    variables = expr_vars(guard)
    factor = (spec.rel("read") ** len(variables) * spec.rel(guard.op)
              * _op_rels(guard.lhs, spec) * _op_rels(guard.rhs, spec))

    op = guard.op
    lhs, rhs = guard.lhs, guard.rhs
    lhs_const = _fold_const(lhs)
    rhs_const = _fold_const(rhs)

    if lhs_const is not None and rhs_const is not None:
        if _COMPARE[op](lhs_const, rhs_const):
            return _scale_all(state, factor)
        return bottom_state(tuple(state))

    if lhs_const is not None and rhs_const is None:
        lhs, rhs = rhs, lhs
        lhs_const, rhs_const = rhs_const, lhs_const
        op = _FLIP[op]

    if rhs_const is not None and isinstance(lhs, Var):
        return _refine_compare(state, lhs.name, op, rhs_const, factor)

    if (rhs_const is not None and op in ("eq", "ne")
            and isinstance(lhs, BinOp) and lhs.op == "mod"
            and isinstance(lhs.lhs, Var)):
        k = _fold_const(lhs.rhs)
        if k is not None and k != 0:
            return _refine_congruence(state, lhs.lhs.name, abs(k),
                                      rhs_const, op == "eq", factor)
        if k == 0:
            _warn(warnings, f"line {guard.line}: congruence guard has zero "
                            f"modulus; no refinement applied")

    return _scale_all(state, factor)


def _scale_all(state: State, factor: float) -> State:
    return {v: ValueRange(e.lo, e.hi, min(1.0, e.prob * factor))
            for v, e in state.items()}


def _refine_compare(state: State, name: str, op: str, c: int,
                    factor: float) -> State:
    e = state[name]
    lo, hi = e.lo, e.hi
    if op == "lt":
        hi = min(hi, c - 1)
    elif op == "le":
        hi = min(hi, c)
    elif op == "gt":
        lo = max(lo, c + 1)
    elif op == "ge":
        lo = max(lo, c)
    elif op == "eq":
        lo, hi = max(lo, c), min(hi, c)
    else:
        if lo == hi == c:
            return bottom_state(tuple(state))
        if lo == c:
            lo += 1
        if hi == c:
            hi -= 1
    if lo > hi:
        return bottom_state(tuple(state))
    out = _scale_all(state, factor)
    ratio = (hi - lo + 1) / e.width
    out[name] = ValueRange(lo, hi, min(1.0, e.prob * ratio * factor))
    return out


def _refine_congruence(state: State, name: str, k: int, c: int,
                       keep_equal: bool, factor: float) -> State:
    e = state[name]

    def sat(v: int) -> bool:
        return (c_mod(v, k) == c) == keep_equal

    # Residues of truncating % repeat with period k only within one sign; a
    # single bounded scan from an endpoint can miss the other sign's values,
    # so scan from each sign segment's boundary.
    starts_up = [e.lo] + ([0] if e.lo < 0 <= e.hi else [])
    starts_down = [e.hi] + ([-1] if e.lo <= -1 < e.hi else [])
    lo = min((v for s in starts_up
              for v in range(s, min(s + k, e.hi + 1)) if sat(v)),
             default=None)
    if lo is None:
        return bottom_state(tuple(state))
    hi = max(v for s in starts_down
             for v in range(s, max(s - k, e.lo - 1), -1) if sat(v))
    out = _scale_all(state, factor)
    ratio = (hi - lo + 1) / e.width
    out[name] = ValueRange(lo, hi, min(1.0, e.prob * ratio * factor))
    return out


_COMPARE = {
    "lt": lambda a, b: a < b,
    "le": lambda a, b: a <= b,
    "gt": lambda a, b: a > b,
    "ge": lambda a, b: a >= b,
    "eq": lambda a, b: a == b,
    "ne": lambda a, b: a != b,
}
