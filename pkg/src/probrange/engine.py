"""Equation system over a CFG and its fixpoint solver.

Each non-entry node i owes its state to the join over incoming edges of the
edge action's transfer applied to the source node's state; the entry node is
the constant state giving every variable the full machine range at
probability 1. The solver iterates from all-bottom until a full pass commits
nothing.

Commit rule: a node's stored state is replaced only when the recomputed
state's value part (sets or intervals) differs. Probabilities shrink on every
trip around a loop, so a pure-probability fixpoint does not exist; iteration
therefore stops when the value parts stabilize and each node keeps the
probability from its last value-changing update. Iteration counts reported
here are committing passes; the final confirming pass is free.

With widening enabled, loop-head nodes (targets of back edges) instead keep
their state when the recomputation is below it and otherwise widen toward the
threshold set; widened nodes commit on any change, value or probability.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from . import abstract, concrete
from .cfg import CFG, AssignAction, Edge, GuardAction, loop_heads
from .hardware import HardwareSpec

SCHEDULES = ("round-robin", "worklist")


@dataclass(frozen=True)
class EquationSystem:
    cfg: CFG
    preds: tuple[tuple[Edge, ...], ...]

    @property
    def variables(self) -> tuple[str, ...]:
        return self.cfg.variables


def build_equations(cfg: CFG) -> EquationSystem:
    """One equation per node: the join over incoming edges' transfers."""
    return EquationSystem(cfg, tuple(tuple(p) for p in cfg.preds()))


@dataclass
class SolveResult:
    states: dict[int, dict]
    iterations: int
    converged: bool
    schedule: str
    warnings: list[str]
    trace: Optional[list[dict[int, dict]]] = None


class _Domain:
    """Uniform face over the two domain modules for the solver."""

    def __init__(self, name: str, spec: HardwareSpec, cap: int):
        self.mod = abstract if name == "abstract" else concrete
        self.spec = spec
        self.cap = cap

    def bottom(self, variables):
        return self.mod.bottom_state(variables)

    def entry(self, variables):
        return self.mod.entry_state(variables, self.spec)

    def join(self, a, b):
        return self.mod.join_states(a, b)

    def leq(self, a, b):
        return self.mod.leq_states(a, b)

    def value_part(self, state):
        return self.mod.value_part(state)

    def transfer(self, state, action, warnings):
        if isinstance(action, AssignAction):
            if self.mod is concrete:
                return concrete.sp_assign(state, action.target, action.value,
                                          self.spec, warnings, self.cap)
            return abstract.sp_assign(state, action.target, action.value,
                                      self.spec, warnings)
        if self.mod is concrete:
            return concrete.sp_guard(state, action.cond, self.spec,
                                     warnings, self.cap)
        return abstract.sp_guard(state, action.cond, self.spec, warnings)


def solve(system: EquationSystem, spec: HardwareSpec, domain: str = "abstract",
          widening: Optional[tuple[int, ...]] = None, max_iters: int = 20,
          schedule: str = "round-robin", widen_all: bool = False,
          cap: int = concrete.DEFAULT_TUPLE_CAP,
          keep_trace: bool = False) -> SolveResult:
    """Iterate the equation system to a practical fixpoint.

    domain is "concrete" or "abstract". widening, when given, is the sorted
    threshold tuple (abstract domain only); it applies at loop-head nodes, or
    at every node when widen_all is set. max_iters bounds committing passes
    and running into it clears the converged flag. schedule "round-robin"
    recomputes every node in id order each pass; "worklist" recomputes only
    nodes whose predecessors changed, and then the iteration count is
    individual node commits rather than passes.
    """
    if domain not in ("concrete", "abstract"):
        raise ValueError(f"unknown domain {domain!r}")
    if schedule not in SCHEDULES:
        raise ValueError(f"unknown schedule {schedule!r}")
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    if widening is not None and domain == "concrete":
        raise ValueError("widening applies to the abstract domain only")

    dom = _Domain(domain, spec, cap)
    cfg = system.cfg
    variables = system.variables
    warnings: list[str] = []
    states: dict[int, dict] = {n: dom.bottom(variables)
                               for n in range(cfg.node_count)}
    states[cfg.entry] = dom.entry(variables)
    if widening is None:
        widen_nodes: frozenset[int] = frozenset()
    elif widen_all:
        widen_nodes = frozenset(range(cfg.node_count)) - {cfg.entry}
    else:
        widen_nodes = frozenset(loop_heads(cfg))
    trace: Optional[list[dict[int, dict]]] = [] if keep_trace else None

    def recompute(node: int) -> dict:
        out = dom.bottom(variables)
        for edge in system.preds[node]:
            out = dom.join(out, dom.transfer(states[edge.src], edge.action,
                                             warnings))
        return out

    def try_commit(node: int) -> bool:
        new = recompute(node)
        if node in widen_nodes:
            cur = states[node]
            if dom.leq(new, cur):
                return False
            widened = abstract.widen_states(cur, new, widening)
            if widened == cur:
                return False
            states[node] = widened
            return True
        if dom.value_part(new) == dom.value_part(states[node]):
            return False
        states[node] = new
        return True

    targets = [n for n in range(cfg.node_count) if n != cfg.entry]
    if schedule == "round-robin":
        iterations = 0
        converged = False
        for _ in range(max_iters):
            changed = False
            for node in targets:
                changed = try_commit(node) or changed
            if not changed:
                converged = True
                break
            iterations += 1
            if trace is not None:
                trace.append({n: dict(s) for n, s in states.items()})
        return SolveResult(states, iterations, converged, schedule,
                           warnings, trace)

    budget = max_iters * max(1, len(targets))
    pending = deque(targets)
    queued = set(targets)
    succs = cfg.succs()
    commits = 0
    converged = True
    while pending:
        node = pending.popleft()
        queued.discard(node)
        if not try_commit(node):
            continue
        commits += 1
        if trace is not None:
            trace.append({n: dict(s) for n, s in states.items()})
        if commits >= budget:
            converged = False
            break
        for dst in succs[node]:
            if dst != cfg.entry and dst not in queued:
                pending.append(dst)
                queued.add(dst)
    return SolveResult(states, commits, converged and not pending, schedule,
                       warnings, trace)


def check_soundness(concrete_result: SolveResult,
                    abstract_result: SolveResult) -> list[str]:
    """Variable-wise comparison of the two fixpoints through abstraction.

    For every node and variable, the abstraction of the concrete value must
    sit below the abstract value. Returns one message per violation; an empty
    list means the abstract run soundly covers the concrete one.
    """
    violations = []
    for node, cstate in concrete_result.states.items():
        astate = abstract_result.states[node]
        for var, celem in cstate.items():
            lifted = abstract.alpha(celem)
            aelem = astate[var]
            if not lifted.leq(aelem):
                violations.append(
                    f"node {node}, variable {var}: alpha(concrete) = "
                    f"<[{lifted.lo},{lifted.hi}], {lifted.prob}> is not below "
                    f"abstract <[{aelem.lo},{aelem.hi}], {aelem.prob}>")
    return violations
