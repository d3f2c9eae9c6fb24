"""Lexer, AST, and recursive-descent parser for the analyzed language.

The language is a C-like fragment whose every operation is suffixed with a dot
to mark it as running on unreliable hardware. Programs are either a single
`void` function with `int` parameters or a bare statement list.

Expressions follow standard C precedence, assignment right-associative and the
rest left-associative:

    expr       := assign
    assign     := or [ '=.' assign ]        (left side must be a variable)
    or         := and { '||.' and }
    and        := equality { '&&.' equality }
    equality   := relational { ('==.'|'!=.') relational }
    relational := additive { ('<.'|'<=.'|'>.'|'>=.') additive }
    additive   := term { ('+.'|'-.') term }
    term       := unary { ('*.'|'/.'|'%.') unary }
    unary      := '!.' unary | '-' unary | '+' unary | atom
    atom       := INT | IDENT | '(' expr ')'

Statements and the program shell:

    program    := function | stmt+
    function   := 'void' IDENT '(' [ 'int' IDENT { ',' 'int' IDENT } ] ')' block
    block      := '{' { stmt } '}'
    body       := block | stmt
    stmt       := expr ';'                  (must be a single assignment)
               | 'while' '(' expr ')' body
               | 'if' '(' expr ')' body [ 'else' body ]

Plain `-` and `+` exist only to write signed literals and are folded away at
parse time; they are not unreliable ops and charge no reliability factor.
Statement-level validation keeps the analyzable shape: an expression statement
must be one non-chained assignment with an arithmetic right side, and a
while/if condition must be a comparison of arithmetic operands or a logical
combination of such comparisons. `//` starts a line comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class FrontendError(Exception):
    """Base for errors raised while turning source text into a CFG."""


class LexError(FrontendError):
    pass


class ParseError(FrontendError):
    pass


class LiteralRangeError(FrontendError):
    pass


# --- tokens ---

KEYWORDS = {"void", "int", "while", "if", "else"}

# longest first so `==.` wins over `=.` and `<=.` over `<.`
OPERATORS = ("==.", "!=.", "<=.", ">=.", "&&.", "||.",
             "=.", "<.", ">.", "+.", "-.", "*.", "/.", "%.", "!.")

PUNCT = "(){};,-+"

ARITH_TOKENS = {"+.": "add", "-.": "sub", "*.": "mul", "/.": "div", "%.": "mod"}
CMP_TOKENS = {"<.": "lt", "<=.": "le", ">.": "gt", ">=.": "ge", "==.": "eq", "!=.": "ne"}

_MAX_LITERAL = 2**63 - 1


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "int", "eof", a keyword, an operator, or punctuation
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        for op in OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token(op, op, line, col))
                i += len(op)
                col += len(op)
                break
        else:
            if ch.isdigit():
                j = i
                while j < n and source[j].isdigit():
                    j += 1
                text = source[i:j]
                if int(text) > _MAX_LITERAL:
                    raise LexError(f"line {line}: literal {text} does not fit in 64 bits")
                tokens.append(Token("int", text, line, col))
                col += j - i
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (source[j].isalnum() or source[j] == "_"):
                    j += 1
                word = source[i:j]
                tokens.append(Token(word if word in KEYWORDS else "ident", word, line, col))
                col += j - i
                i = j
            elif ch in PUNCT:
                tokens.append(Token(ch, ch, line, col))
                i += 1
                col += 1
            else:
                raise LexError(f"line {line}, col {col}: unexpected character {ch!r}")
    tokens.append(Token("eof", "", line, col))
    return tokens


# --- AST ---

@dataclass(frozen=True)
class Const:
    value: int
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Var:
    name: str
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class BinOp:
    op: str  # add, sub, mul, div, mod
    lhs: Expr
    rhs: Expr
    line: int = field(compare=False, default=0)


Expr = Const | Var | BinOp


@dataclass(frozen=True)
class Cmp:
    op: str  # lt, le, gt, ge, eq, ne
    lhs: object
    rhs: object
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class LogicalOp:
    op: str  # and, or
    lhs: Cond
    rhs: Cond
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Not:
    arg: Cond
    line: int = field(compare=False, default=0)


Cond = Cmp | LogicalOp | Not


@dataclass(frozen=True)
class AssignExpr:
    """Assignment in expression position; statements unwrap one layer."""

    target: str
    value: object
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Assign:
    target: str
    value: Expr
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Block:
    stmts: tuple[Stmt, ...]
    end_line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class While:
    cond: Cond
    body: Block
    line: int = field(compare=False, default=0)


@dataclass(frozen=True)
class If:
    cond: Cond
    then: Block
    orelse: Block | None = None
    line: int = field(compare=False, default=0)


Stmt = Assign | While | If


@dataclass(frozen=True)
class Program:
    name: str | None  # None for a bare statement list
    params: tuple[str, ...]
    body: Block
    line: int = field(compare=False, default=1)


def end_line(stmt: Stmt) -> int:
    """Last source line a statement occupies (a block's closing brace)."""
    if isinstance(stmt, Assign):
        return stmt.line
    if isinstance(stmt, While):
        return stmt.body.end_line
    return (stmt.orelse or stmt.then).end_line


def is_arith(e) -> bool:
    if isinstance(e, (Const, Var)):
        return True
    if isinstance(e, BinOp):
        return is_arith(e.lhs) and is_arith(e.rhs)
    return False


def is_condition(c) -> bool:
    """Comparison of arithmetic operands, or a logical combination of such."""
    if isinstance(c, Cmp):
        return is_arith(c.lhs) and is_arith(c.rhs)
    if isinstance(c, LogicalOp):
        return is_condition(c.lhs) and is_condition(c.rhs)
    if isinstance(c, Not):
        return is_condition(c.arg)
    return False


# --- parser ---

class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"line {tok.line}: expected {kind!r}, got {tok.text or 'end of input'!r}")
        return self.next()

    # statements

    def program(self) -> Program:
        if self.peek().kind == "void":
            return self.function()
        stmts = []
        while self.peek().kind != "eof":
            stmts.append(self.stmt())
        if not stmts:
            raise ParseError("empty program")
        return Program(None, (), Block(tuple(stmts), end_line(stmts[-1])),
                       line=stmts[0].line)

    def function(self) -> Program:
        header = self.expect("void")
        name = self.expect("ident").text
        self.expect("(")
        params: list[str] = []
        if self.peek().kind != ")":
            while True:
                self.expect("int")
                params.append(self.expect("ident").text)
                if self.peek().kind != ",":
                    break
                self.next()
        self.expect(")")
        body = self.block()
        self.expect("eof")
        if len(set(params)) != len(params):
            raise ParseError(f"line {header.line}: duplicate parameter name")
        return Program(name, tuple(params), body, line=header.line)

    def block(self) -> Block:
        self.expect("{")
        stmts = []
        while self.peek().kind != "}":
            if self.peek().kind == "eof":
                raise ParseError(f"line {self.peek().line}: unclosed block")
            stmts.append(self.stmt())
        close = self.next()
        return Block(tuple(stmts), close.line)

    def body(self) -> Block:
        if self.peek().kind == "{":
            return self.block()
        stmt = self.stmt()
        return Block((stmt,), end_line(stmt))

    def stmt(self) -> Stmt:
        tok = self.peek()
        if tok.kind == "while":
            self.next()
            self.expect("(")
            cond = self.condition()
            self.expect(")")
            return While(cond, self.body(), line=tok.line)
        if tok.kind == "if":
            self.next()
            self.expect("(")
            cond = self.condition()
            self.expect(")")
            then = self.body()
            orelse = None
            if self.peek().kind == "else":
                self.next()
                orelse = self.body()
            return If(cond, then, orelse, line=tok.line)
        e = self.expr()
        self.expect(";")
        if not isinstance(e, AssignExpr):
            raise ParseError(f"line {tok.line}: expression statement must be an assignment")
        if isinstance(e.value, AssignExpr):
            raise ParseError(f"line {tok.line}: chained assignment is not allowed")
        if not is_arith(e.value):
            raise ParseError(
                f"line {tok.line}: assignment right side must be an arithmetic expression")
        return Assign(e.target, e.value, line=e.line)

    def condition(self) -> Cond:
        tok = self.peek()
        c = self.expr()
        if isinstance(c, AssignExpr):
            raise ParseError(f"line {tok.line}: assignment is not allowed in a condition")
        if not is_condition(c):
            raise ParseError(f"line {tok.line}: condition must compare arithmetic expressions")
        return c

    # expressions, loosest binding first

    def expr(self):
        lhs = self.or_level()
        if self.peek().kind == "=.":
            tok = self.next()
            if not isinstance(lhs, Var):
                raise ParseError(f"line {tok.line}: assignment target must be a variable")
            return AssignExpr(lhs.name, self.expr(), line=lhs.line)
        return lhs

    def or_level(self):
        node = self.and_level()
        while self.peek().kind == "||.":
            tok = self.next()
            node = LogicalOp("or", node, self.and_level(), line=tok.line)
        return node

    def and_level(self):
        node = self.equality()
        while self.peek().kind == "&&.":
            tok = self.next()
            node = LogicalOp("and", node, self.equality(), line=tok.line)
        return node

    def equality(self):
        node = self.relational()
        while self.peek().kind in ("==.", "!=."):
            tok = self.next()
            node = Cmp(CMP_TOKENS[tok.kind], node, self.relational(), line=tok.line)
        return node

    def relational(self):
        node = self.additive()
        while self.peek().kind in ("<.", "<=.", ">.", ">=."):
            tok = self.next()
            node = Cmp(CMP_TOKENS[tok.kind], node, self.additive(), line=tok.line)
        return node

    def additive(self):
        node = self.term()
        while self.peek().kind in ("+.", "-."):
            tok = self.next()
            node = BinOp(ARITH_TOKENS[tok.kind], node, self.term(), line=tok.line)
        return node

    def term(self):
        node = self.unary()
        while self.peek().kind in ("*.", "/.", "%."):
            tok = self.next()
            node = BinOp(ARITH_TOKENS[tok.kind], node, self.unary(), line=tok.line)
        return node

    def unary(self):
        tok = self.peek()
        if tok.kind == "!.":
            self.next()
            return Not(self.unary(), line=tok.line)
        if tok.kind in ("-", "+"):
            # signed literals only; there is no unreliable unary arithmetic
            self.next()
            operand = self.unary()
            if not isinstance(operand, Const):
                raise ParseError(f"line {tok.line}: {tok.kind!r} applies to integer literals only")
            return Const(-operand.value if tok.kind == "-" else operand.value, line=tok.line)
        return self.atom()

    def atom(self):
        tok = self.next()
        if tok.kind == "int":
            return Const(int(tok.text), line=tok.line)
        if tok.kind == "ident":
            return Var(tok.text, line=tok.line)
        if tok.kind == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"line {tok.line}: expected an expression, got {tok.text or 'end of input'!r}")


def parse_program(source: str) -> Program:
    return _Parser(tokenize(source)).program()


# --- validation and queries ---

def walk_exprs(node) -> list:
    """All expression and condition nodes under an AST node, preorder."""
    out: list = []

    def visit(x) -> None:
        out.append(x)
        if isinstance(x, (BinOp, Cmp, LogicalOp)):
            visit(x.lhs)
            visit(x.rhs)
        elif isinstance(x, Not):
            visit(x.arg)
        elif isinstance(x, AssignExpr):
            visit(x.value)

    def stmts(block: Block) -> None:
        for s in block.stmts:
            if isinstance(s, Assign):
                visit(s.value)
            elif isinstance(s, While):
                visit(s.cond)
                stmts(s.body)
            elif isinstance(s, If):
                visit(s.cond)
                stmts(s.then)
                if s.orelse is not None:
                    stmts(s.orelse)

    if isinstance(node, Program):
        stmts(node.body)
    elif isinstance(node, Block):
        stmts(node)
    else:
        visit(node)
    return out


def expr_vars(node) -> tuple[str, ...]:
    """Distinct variables in an expression or condition, sorted by name."""
    return tuple(sorted({x.name for x in walk_exprs(node) if isinstance(x, Var)}))


def validate_literals(program: Program, minint: int, maxint: int) -> None:
    for node in walk_exprs(program):
        if isinstance(node, Const) and not minint <= node.value <= maxint:
            raise LiteralRangeError(
                f"line {node.line}: literal {node.value} outside [{minint},{maxint}]")


def program_vars(program: Program) -> tuple[str, ...]:
    """Every variable the program mentions, parameters included, sorted."""
    names = set(program.params)
    for node in walk_exprs(program):
        if isinstance(node, Var):
            names.add(node.name)

    def targets(block: Block) -> None:
        for s in block.stmts:
            if isinstance(s, Assign):
                names.add(s.target)
            elif isinstance(s, While):
                targets(s.body)
            elif isinstance(s, If):
                targets(s.then)
                if s.orelse is not None:
                    targets(s.orelse)

    targets(program.body)
    return tuple(sorted(names))


# --- printing ---

_ARITH_TEXT = {v: k for k, v in ARITH_TOKENS.items()}
_CMP_TEXT = {v: k for k, v in CMP_TOKENS.items()}
_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "mod": 2}


def expr_source(e: Expr, parent_prec: int = 0, right: bool = False) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    prec = _PREC[e.op]
    text = (f"{expr_source(e.lhs, prec)} {_ARITH_TEXT[e.op]} "
            f"{expr_source(e.rhs, prec, right=True)}")
    if prec < parent_prec or (prec == parent_prec and right):
        return f"({text})"
    return text


def cond_source(c: Cond, parent: int = 0) -> str:
    # binding levels: or=1, and=2; comparisons bind tighter than both
    if isinstance(c, Cmp):
        lhs = cond_source(c.lhs, 3) if isinstance(c.lhs, (Cmp, LogicalOp, Not)) else expr_source(c.lhs)
        rhs = cond_source(c.rhs, 3) if isinstance(c.rhs, (Cmp, LogicalOp, Not)) else expr_source(c.rhs)
        return f"{lhs} {_CMP_TEXT[c.op]} {rhs}"
    if isinstance(c, Not):
        inner = cond_source(c.arg, 3)
        return f"!. {inner}" if isinstance(c.arg, Not) else f"!. ({inner})"
    level = 1 if c.op == "or" else 2
    text = (f"{cond_source(c.lhs, level)} {'||.' if c.op == 'or' else '&&.'} "
            f"{cond_source(c.rhs, level + 1)}")
    return f"({text})" if level < parent else text


def to_source(program: Program) -> str:
    """Canonical source text; parsing it back gives an equal Program."""
    lines: list[str] = []

    def emit(block: Block, depth: int) -> None:
        pad = "  " * depth
        for s in block.stmts:
            if isinstance(s, Assign):
                lines.append(f"{pad}{s.target} =. {expr_source(s.value)};")
            elif isinstance(s, While):
                lines.append(f"{pad}while ({cond_source(s.cond)}) {{")
                emit(s.body, depth + 1)
                lines.append(f"{pad}}}")
            else:
                lines.append(f"{pad}if ({cond_source(s.cond)}) {{")
                emit(s.then, depth + 1)
                if s.orelse is not None:
                    lines.append(f"{pad}}} else {{")
                    emit(s.orelse, depth + 1)
                lines.append(f"{pad}}}")

    if program.name is None:
        emit(program.body, 0)
    else:
        params = ", ".join(f"int {p}" for p in program.params)
        lines.append(f"void {program.name}({params}) {{")
        emit(program.body, 1)
        lines.append("}")
    return "\n".join(lines) + "\n"
