"""Abstract and concrete syntax of the WHILE-style machine language.

Programs read their input from ``X0`` and leave their output there. The
concrete grammar::

    prog  ::= stmt (';' stmt)* [';'] | <empty>
    stmt  ::= Xk ':=' expr
            | 'while' expr '{' prog '}'
            | 'if' expr '{' prog '}' ['else' '{' prog '}']
            | 'split' Xk 'into' '(' Xi ',' Xj ')'
            | 'join' '(' Xi ',' Xj ')' 'into' Xk
    expr  ::= 'nil' | Xk | 'cons' '(' expr ',' expr ')' | 'hd' expr
            | 'tl' expr | 'eq?' '(' expr ',' expr ')' | '(' expr ')'

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Union


# -- expressions --------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    index: int

    @cached_property
    def nodes(self) -> int:
        return 1


@dataclass(frozen=True)
class NilLit:
    @cached_property
    def nodes(self) -> int:
        return 1


@dataclass(frozen=True)
class ConsE:
    left: Expr
    right: Expr

    @cached_property
    def nodes(self) -> int:
        return 1 + self.left.nodes + self.right.nodes


@dataclass(frozen=True)
class Hd:
    arg: Expr

    @cached_property
    def nodes(self) -> int:
        return 1 + self.arg.nodes


@dataclass(frozen=True)
class Tl:
    arg: Expr

    @cached_property
    def nodes(self) -> int:
        return 1 + self.arg.nodes


@dataclass(frozen=True)
class EqAtom:
    left: Expr
    right: Expr

    @cached_property
    def nodes(self) -> int:
        return 1 + self.left.nodes + self.right.nodes


Expr = Union[Var, NilLit, ConsE, Hd, Tl, EqAtom]

NIL_EXPR = NilLit()


# -- statements ---------------------------------------------------------------

@dataclass(frozen=True)
class Assign:
    var: int
    expr: Expr


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple[Stmt, ...]


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple[Stmt, ...]
    orelse: tuple[Stmt, ...] = ()


@dataclass(frozen=True)
class SplitPair:
    """``split Xsrc into (Xleft, Xright)``; reads first, then writes left, then right."""

    src: int
    left: int
    right: int


@dataclass(frozen=True)
class JoinPair:
    """``join (Xleft, Xright) into Xdst``."""

    left: int
    right: int
    dst: int


Stmt = Union[Assign, While, If, SplitPair, JoinPair]


@dataclass(frozen=True)
class Program:
    body: tuple[Stmt, ...] = ()

    def __str__(self) -> str:
        return print_program(self)

    @cached_property
    def max_var(self) -> int:
        """Largest variable index mentioned (0 for programs touching only X0)."""
        return max(program_vars(self), default=0)

    @cached_property
    def ast_size(self) -> int:
        return sum(_stmt_nodes(s) for s in self.body)


def _expr_vars(e: Expr) -> Iterator[int]:
    stack = [e]
    while stack:
        e = stack.pop()
        if isinstance(e, Var):
            yield e.index
        elif isinstance(e, (ConsE, EqAtom)):
            stack.append(e.left)
            stack.append(e.right)
        elif isinstance(e, (Hd, Tl)):
            stack.append(e.arg)


def iter_stmts(body: tuple[Stmt, ...]) -> Iterator[Stmt]:
    """All statements of a body, nested ones included, in pre-order."""
    for s in body:
        yield s
        if isinstance(s, While):
            yield from iter_stmts(s.body)
        elif isinstance(s, If):
            yield from iter_stmts(s.then)
            yield from iter_stmts(s.orelse)


def program_vars(p: Program) -> set[int]:
    out = {0}
    for s in iter_stmts(p.body):
        if isinstance(s, Assign):
            out.add(s.var)
            out.update(_expr_vars(s.expr))
        elif isinstance(s, (While, If)):
            out.update(_expr_vars(s.cond))
        elif isinstance(s, SplitPair):
            out.update((s.src, s.left, s.right))
        else:
            out.update((s.left, s.right, s.dst))
    return out


def _stmt_nodes(s: Stmt) -> int:
    if isinstance(s, Assign):
        return 1 + s.expr.nodes
    if isinstance(s, While):
        return 1 + s.cond.nodes + sum(_stmt_nodes(b) for b in s.body)
    if isinstance(s, If):
        return (1 + s.cond.nodes + sum(_stmt_nodes(b) for b in s.then)
                + sum(_stmt_nodes(b) for b in s.orelse))
    return 1


def rename_vars(p: Program, mapping) -> Program:
    """Apply ``mapping`` (a callable on indices) to every variable."""

    def ex(e: Expr) -> Expr:
        if isinstance(e, Var):
            return Var(mapping(e.index))
        if isinstance(e, ConsE):
            return ConsE(ex(e.left), ex(e.right))
        if isinstance(e, EqAtom):
            return EqAtom(ex(e.left), ex(e.right))
        if isinstance(e, Hd):
            return Hd(ex(e.arg))
        if isinstance(e, Tl):
            return Tl(ex(e.arg))
        return e

    def st(s: Stmt) -> Stmt:
        if isinstance(s, Assign):
            return Assign(mapping(s.var), ex(s.expr))
        if isinstance(s, While):
            return While(ex(s.cond), tuple(map(st, s.body)))
        if isinstance(s, If):
            return If(ex(s.cond), tuple(map(st, s.then)), tuple(map(st, s.orelse)))
        if isinstance(s, SplitPair):
            return SplitPair(mapping(s.src), mapping(s.left), mapping(s.right))
        return JoinPair(mapping(s.left), mapping(s.right), mapping(s.dst))

    return Program(tuple(map(st, p.body)))


# -- printing -----------------------------------------------------------------

def print_expr(e: Expr) -> str:
    if isinstance(e, Var):
        return f"X{e.index}"
    if isinstance(e, NilLit):
        return "nil"
    if isinstance(e, ConsE):
        return f"cons({print_expr(e.left)}, {print_expr(e.right)})"
    if isinstance(e, EqAtom):
        return f"eq?({print_expr(e.left)}, {print_expr(e.right)})"
    if isinstance(e, Hd):
        return f"hd {print_expr(e.arg)}"
    if isinstance(e, Tl):
        return f"tl {print_expr(e.arg)}"
    raise TypeError(f"not an expression: {e!r}")


def _print_body(body: tuple[Stmt, ...], indent: int) -> list[str]:
    lines = []
    for i, s in enumerate(body):
        sep = ";" if i < len(body) - 1 else ""
        chunk = _print_stmt(s, indent)
        chunk[-1] += sep
        lines.extend(chunk)
    return lines


def _print_block(body: tuple[Stmt, ...], indent: int) -> tuple[str, list[str]]:
    if not body:
        return "{ }", []
    return "{", _print_body(body, indent + 1) + ["    " * indent + "}"]


def _print_stmt(s: Stmt, indent: int) -> list[str]:
    pad = "    " * indent
    if isinstance(s, Assign):
        return [f"{pad}X{s.var} := {print_expr(s.expr)}"]
    if isinstance(s, SplitPair):
        return [f"{pad}split X{s.src} into (X{s.left}, X{s.right})"]
    if isinstance(s, JoinPair):
        return [f"{pad}join (X{s.left}, X{s.right}) into X{s.dst}"]
    if isinstance(s, While):
        head, rest = _print_block(s.body, indent)
        return [f"{pad}while {print_expr(s.cond)} {head}"] + rest
    if isinstance(s, If):
        head, rest = _print_block(s.then, indent)
        lines = [f"{pad}if {print_expr(s.cond)} {head}"] + rest
        ehead, erest = _print_block(s.orelse, indent)
        lines[-1] += f" else {ehead}"
        return lines + erest
    raise TypeError(f"not a statement: {s!r}")


def print_program(p: Program) -> str:
    return "\n".join(_print_body(p.body, 0))


def print_stmts(body: tuple[Stmt, ...]) -> str:
    """Single-line rendering, used for trace dumps."""
    return " ".join(print_program(Program(body)).split())


# -- parsing ------------------------------------------------------------------

class ProgramSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<var>X(?:0|[1-9][0-9]*))\b
  | (?P<kw>while|if|else|split|join|into|nil|cons|hd|tl)\b
  | (?P<eq>eq\?)
  | (?P<assign>:=)
  | (?P<punct>[;{}(),])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ProgramSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            tokens.append((kind if kind in ("var",) else value, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def error(self, message: str):
        _, value, line, col = self.tokens[self.i]
        shown = value or "end of input"
        raise ProgramSyntaxError(f"{message}, got {shown!r}", line, col)

    def take(self, kind: str) -> str:
        if self.peek() != kind:
            self.error(f"expected {kind!r}")
        value = self.tokens[self.i][1]
        self.i += 1
        return value

    def var(self) -> int:
        return int(self.take("var")[1:])

    def body(self, closing: str) -> tuple[Stmt, ...]:
        stmts = []
        while self.peek() != closing:
            stmts.append(self.stmt())
            if self.peek() == ";":
                self.i += 1
            elif self.peek() != closing:
                self.error("expected ';'")
        return tuple(stmts)

    def block(self) -> tuple[Stmt, ...]:
        self.take("{")
        body = self.body("}")
        self.take("}")
        return body

    def stmt(self) -> Stmt:
        tok = self.peek()
        if tok == "var":
            v = self.var()
            self.take(":=")
            return Assign(v, self.expr())
        if tok == "while":
            self.i += 1
            cond = self.expr()
            return While(cond, self.block())
        if tok == "if":
            self.i += 1
            cond = self.expr()
            then = self.block()
            orelse: tuple[Stmt, ...] = ()
            if self.peek() == "else":
                self.i += 1
                orelse = self.block()
            return If(cond, then, orelse)
        if tok == "split":
            self.i += 1
            src = self.var()
            self.take("into")
            self.take("(")
            left = self.var()
            self.take(",")
            right = self.var()
            self.take(")")
            return SplitPair(src, left, right)
        if tok == "join":
            self.i += 1
            self.take("(")
            left = self.var()
            self.take(",")
            right = self.var()
            self.take(")")
            self.take("into")
            return JoinPair(left, right, self.var())
        self.error("expected a statement")

    def expr(self) -> Expr:
        tok = self.peek()
        if tok == "var":
            return Var(self.var())
        if tok == "nil":
            self.i += 1
            return NIL_EXPR
        if tok in ("hd", "tl"):
            self.i += 1
            arg = self.expr()
            return Hd(arg) if tok == "hd" else Tl(arg)
        if tok in ("cons", "eq?"):
            self.i += 1
            self.take("(")
            left = self.expr()
            self.take(",")
            right = self.expr()
            self.take(")")
            return ConsE(left, right) if tok == "cons" else EqAtom(left, right)
        if tok == "(":
            self.i += 1
            e = self.expr()
            self.take(")")
            return e
        self.error("expected an expression")


def parse_program(text: str) -> Program:
    """Parse concrete syntax; raises :class:`ProgramSyntaxError`.

    >>> parse_program("while X0 { X0 := tl X0 }").body[0].cond
    Var(index=0)
    """
    parser = _Parser(text)
    body = parser.body("eof")
    return Program(body)
