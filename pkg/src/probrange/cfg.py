"""Control-flow graph over program points.

Nodes are program points labeled with source lines; edges carry the action
(an assignment or a guard) that leads from one point to the next. Statement
lists are threaded so that a loop's head is the point the loop statement sits
at, the loop body flows back into the head, and the point after the loop is
reached through the negated guard.

Guards are plain comparisons. `x <. c` with a constant right side is rewritten
to `x <=. c-1` on the edge, which also swaps the charged reliability from the
`lt` op to the `le` op; the false edge carries the negation of the original
guard. Logical guards (`&&.`, `||.`, `!.`) have no negation in this edge
language and are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (Assign, Cmp, Cond, Const, FrontendError, If, Program,
                     Stmt, While, cond_source, end_line, expr_source,
                     program_vars, walk_exprs)


class UnsupportedGuard(FrontendError):
    pass


@dataclass(frozen=True)
class AssignAction:
    target: str
    value: object  # Expr

    def __str__(self) -> str:
        return f"{self.target} =. {expr_source(self.value)}"


@dataclass(frozen=True)
class GuardAction:
    cond: Cmp

    def __str__(self) -> str:
        return cond_source(self.cond)


Action = AssignAction | GuardAction


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    action: Action


@dataclass
class CFG:
    lines: list[int]  # node id -> source line
    edges: list[Edge]
    variables: tuple[str, ...]
    entry: int = 0

    @property
    def node_count(self) -> int:
        return len(self.lines)

    def preds(self) -> list[list[Edge]]:
        incoming: list[list[Edge]] = [[] for _ in self.lines]
        for e in self.edges:
            incoming[e.dst].append(e)
        return incoming

    def succs(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.lines]
        for e in self.edges:
            out[e.src].append(e.dst)
        return out

    @property
    def exits(self) -> tuple[int, ...]:
        with_out = {e.src for e in self.edges}
        return tuple(n for n in range(self.node_count) if n not in with_out)


_NEGATED = {"lt": "ge", "le": "gt", "gt": "le", "ge": "lt", "eq": "ne", "ne": "eq"}


def negate_guard(cond: Cond) -> Cmp:
    if not isinstance(cond, Cmp):
        raise UnsupportedGuard(
            f"line {cond.line}: only comparison guards are supported, got {cond_source(cond)!r}")
    return Cmp(_NEGATED[cond.op], cond.lhs, cond.rhs, line=cond.line)


def canonicalize_guard(cond: Cmp) -> Cmp:
    if cond.op == "lt" and isinstance(cond.rhs, Const):
        return Cmp("le", cond.lhs, Const(cond.rhs.value - 1, line=cond.rhs.line),
                   line=cond.line)
    return cond


def _edge_guard(cond: Cond) -> GuardAction:
    if not isinstance(cond, Cmp):
        raise UnsupportedGuard(
            f"line {cond.line}: only comparison guards are supported, got {cond_source(cond)!r}")
    return GuardAction(canonicalize_guard(cond))


class _Builder:
    def __init__(self) -> None:
        self.lines: list[int] = []
        self.edges: list[Edge] = []

    def node(self, line: int) -> int:
        self.lines.append(line)
        return len(self.lines) - 1

    def edge(self, src: int, dst: int, action: Action) -> None:
        self.edges.append(Edge(src, dst, action))

    def thread(self, stmts: tuple[Stmt, ...], entry: int, get_exit) -> None:
        point = entry
        for i, stmt in enumerate(stmts):
            if i + 1 < len(stmts):
                nxt = self.node(stmts[i + 1].line)
                self.emit(stmt, point, lambda nxt=nxt: nxt)
                point = nxt
            else:
                self.emit(stmt, point, get_exit)

    def emit(self, stmt: Stmt, point: int, get_cont) -> None:
        if isinstance(stmt, Assign):
            self.edge(point, get_cont(), AssignAction(stmt.target, stmt.value))
        elif isinstance(stmt, While):
            true_guard = _edge_guard(stmt.cond)
            if stmt.body.stmts:
                body = self.node(stmt.body.stmts[0].line)
                self.edge(point, body, true_guard)
                self.thread(stmt.body.stmts, body, lambda: point)
            else:
                self.edge(point, point, true_guard)
            self.edge(point, get_cont(), _edge_guard(negate_guard(stmt.cond)))
        elif isinstance(stmt, If):
            true_guard = _edge_guard(stmt.cond)
            false_guard = _edge_guard(negate_guard(stmt.cond))
            if stmt.then.stmts:
                then = self.node(stmt.then.stmts[0].line)
                self.edge(point, then, true_guard)
                self.thread(stmt.then.stmts, then, get_cont)
            else:
                self.edge(point, get_cont(), true_guard)
            orelse = stmt.orelse
            if orelse is not None and orelse.stmts:
                other = self.node(orelse.stmts[0].line)
                self.edge(point, other, false_guard)
                self.thread(orelse.stmts, other, get_cont)
            else:
                self.edge(point, get_cont(), false_guard)


def build_cfg(program: Program) -> CFG:
    b = _Builder()
    entry = b.node(program.line)
    stmts = program.body.stmts
    if stmts:
        exit_line = end_line(stmts[-1])
        exit_id: list[int] = []

        def get_exit() -> int:
            if not exit_id:
                exit_id.append(b.node(exit_line))
            return exit_id[0]

        b.thread(stmts, entry, get_exit)
    return CFG(b.lines, b.edges, program_vars(program), entry)


def loop_heads(cfg: CFG) -> set[int]:
    """Back-edge targets, found by DFS from the entry node."""
    succs = cfg.succs()
    color = [0] * cfg.node_count  # 0 unvisited, 1 on stack, 2 done
    heads: set[int] = set()
    stack: list[tuple[int, int]] = [(cfg.entry, 0)]
    color[cfg.entry] = 1
    while stack:
        node, idx = stack.pop()
        if idx < len(succs[node]):
            stack.append((node, idx + 1))
            nxt = succs[node][idx]
            if color[nxt] == 1:
                heads.add(nxt)
            elif color[nxt] == 0:
                color[nxt] = 1
                stack.append((nxt, 0))
        else:
            color[node] = 2
    return heads


def collect_thresholds(cfg: CFG, minint: int, maxint: int) -> tuple[int, ...]:
    """Widening thresholds: every constant on an edge, plus the range bounds.

    Guard constants are read after canonicalization, so a `x <. c` guard
    contributes c-1 through its rewritten form and c through its negation.
    """
    values = {minint, maxint}
    for e in cfg.edges:
        root = e.action.value if isinstance(e.action, AssignAction) else e.action.cond
        for node in walk_exprs(root):
            if isinstance(node, Const):
                values.add(min(max(node.value, minint), maxint))
    return tuple(sorted(values))
