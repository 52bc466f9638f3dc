"""Programs, configurations and traces as trees.

The encoding is kept as small as possible so that naive trace search can
reach real traces. Tags are unary numerals in the head of a pair::

    statement   Assign k e    (0 . (k . e))
                While e b     (1 . (e . b))
                If e b c      (2 . (e . (b . c)))
                Split k i j   (3 . (k . (i . j)))
                Join i j k    (4 . (i . (j . k)))
    expression  Xk            (0 . k)
                nil           (1 . ())
                cons(e, f)    (2 . (e . f))
                hd e          (3 . e)
                tl e          (4 . e)
                eq?(e, f)     (5 . (e . f))
    program     (() . body)           body: Cons-list of statements
    config      (control . store)     store: list of values, no trailing ()
    trace       non-empty Cons-list of configs

Decoding is strict: a tree decodes only if re-encoding gives it back, so
every code has exactly one meaning.
"""

from __future__ import annotations

from .interp import Config, Trace
from .syntax import (
    Assign, ConsE, EqAtom, Expr, Hd, If, JoinPair, NIL_EXPR, NilLit, Program,
    SplitPair, Stmt, Tl, Var, While,
)
from .tree import NIL, Tree, cons, from_list, nat, nat_value

S_ASSIGN, S_WHILE, S_IF, S_SPLIT, S_JOIN = range(5)
E_VAR, E_NIL, E_CONS, E_HD, E_TL, E_EQ = range(6)

_NAT = [nat(k) for k in range(8)]
_TAG_OF = {t: k for k, t in enumerate(_NAT)}

_CACHE_LIMIT = 20_000


class DecodeError(ValueError):
    pass


# Encoded trees are memoised per AST object (by id, keeping the object alive
# so ids are never reused) and decoded ASTs per tree, separately for
# expressions and statements since one tree can be both.
_enc_cache: dict[int, tuple[object, Tree]] = {}
_dec_expr_cache: dict[Tree, Expr] = {}
_dec_stmt_cache: dict[Tree, Stmt] = {}


def _remember(cache: dict, key, value) -> None:
    if len(cache) > _CACHE_LIMIT:
        cache.clear()
    cache[key] = value


def encode_expr(e: Expr) -> Tree:
    hit = _enc_cache.get(id(e))
    if hit is not None:
        return hit[1]
    if isinstance(e, Var):
        t = cons(_NAT[E_VAR], nat(e.index))
    elif isinstance(e, NilLit):
        t = cons(_NAT[E_NIL], NIL)
    elif isinstance(e, ConsE):
        t = cons(_NAT[E_CONS], cons(encode_expr(e.left), encode_expr(e.right)))
    elif isinstance(e, Hd):
        t = cons(_NAT[E_HD], encode_expr(e.arg))
    elif isinstance(e, Tl):
        t = cons(_NAT[E_TL], encode_expr(e.arg))
    elif isinstance(e, EqAtom):
        t = cons(_NAT[E_EQ], cons(encode_expr(e.left), encode_expr(e.right)))
    else:
        raise TypeError(f"not an expression: {e!r}")
    _remember(_enc_cache, id(e), (e, t))
    return t


def encode_stmts(body: tuple[Stmt, ...]) -> Tree:
    t = NIL
    for s in reversed(body):
        t = cons(encode_stmt(s), t)
    return t


def encode_stmt(s: Stmt) -> Tree:
    hit = _enc_cache.get(id(s))
    if hit is not None:
        return hit[1]
    if isinstance(s, Assign):
        t = cons(_NAT[S_ASSIGN], cons(nat(s.var), encode_expr(s.expr)))
    elif isinstance(s, While):
        t = cons(_NAT[S_WHILE], cons(encode_expr(s.cond), encode_stmts(s.body)))
    elif isinstance(s, If):
        t = cons(_NAT[S_IF], cons(encode_expr(s.cond),
                                  cons(encode_stmts(s.then), encode_stmts(s.orelse))))
    elif isinstance(s, SplitPair):
        t = cons(_NAT[S_SPLIT], cons(nat(s.src), cons(nat(s.left), nat(s.right))))
    elif isinstance(s, JoinPair):
        t = cons(_NAT[S_JOIN], cons(nat(s.left), cons(nat(s.right), nat(s.dst))))
    else:
        raise TypeError(f"not a statement: {s!r}")
    _remember(_enc_cache, id(s), (s, t))
    return t


def encode_program(p: Program) -> Tree:
    return cons(NIL, encode_stmts(p.body))


def _pair(t: Tree, what: str) -> tuple[Tree, Tree]:
    if t.left is None:
        raise DecodeError(f"malformed {what}: expected a pair")
    return t.left, t.right


def _var(t: Tree) -> int:
    try:
        return nat_value(t)
    except ValueError:
        raise DecodeError("malformed variable index") from None


def _tag(t: Tree, what: str) -> int:
    tag = _TAG_OF.get(t)
    if tag is None:
        raise DecodeError(f"unknown {what} tag")
    return tag


def decode_expr(t: Tree) -> Expr:
    hit = _dec_expr_cache.get(t)
    if hit is not None:
        return hit
    tag_t, arg = _pair(t, "expression")
    tag = _tag(tag_t, "expression")
    if tag == E_VAR:
        e: Expr = Var(_var(arg))
    elif tag == E_NIL:
        if arg is not NIL:
            raise DecodeError("malformed nil literal")
        e = NIL_EXPR
    elif tag == E_CONS or tag == E_EQ:
        a, b = _pair(arg, "binary expression")
        e = (ConsE if tag == E_CONS else EqAtom)(decode_expr(a), decode_expr(b))
    elif tag == E_HD:
        e = Hd(decode_expr(arg))
    elif tag == E_TL:
        e = Tl(decode_expr(arg))
    else:
        raise DecodeError("unknown expression tag")
    _remember(_dec_expr_cache, t, e)
    _remember(_enc_cache, id(e), (e, t))
    return e


def decode_stmts(t: Tree) -> tuple[Stmt, ...]:
    out = []
    while t.left is not None:
        out.append(decode_stmt(t.left))
        t = t.right
    return tuple(out)


def decode_stmt(t: Tree) -> Stmt:
    hit = _dec_stmt_cache.get(t)
    if hit is not None:
        return hit
    tag_t, arg = _pair(t, "statement")
    tag = _tag(tag_t, "statement")
    if tag == S_ASSIGN:
        k, e = _pair(arg, "assignment")
        s: Stmt = Assign(_var(k), decode_expr(e))
    elif tag == S_WHILE:
        e, body = _pair(arg, "while")
        s = While(decode_expr(e), decode_stmts(body))
    elif tag == S_IF:
        e, rest = _pair(arg, "if")
        then, orelse = _pair(rest, "if")
        s = If(decode_expr(e), decode_stmts(then), decode_stmts(orelse))
    elif tag == S_SPLIT or tag == S_JOIN:
        a, rest = _pair(arg, "split/join")
        b, c = _pair(rest, "split/join")
        s = (SplitPair if tag == S_SPLIT else JoinPair)(_var(a), _var(b), _var(c))
    else:
        raise DecodeError("unknown statement tag")
    _remember(_dec_stmt_cache, t, s)
    _remember(_enc_cache, id(s), (s, t))
    return s


def decode_program(t: Tree) -> Program:
    """Inverse of :func:`encode_program`; raises :class:`DecodeError`."""
    mark, body = _pair(t, "program")
    if mark is not NIL:
        raise DecodeError("malformed program: bad header")
    return Program(decode_stmts(body))


# -- configurations and traces ------------------------------------------------

def encode_store(store: tuple[Tree, ...]) -> Tree:
    return from_list(store)


def decode_store(t: Tree) -> tuple[Tree, ...]:
    out = []
    while t.left is not None:
        out.append(t.left)
        t = t.right
    if out and out[-1] is NIL:
        raise DecodeError("malformed store: trailing unset variable")
    return tuple(out)


def encode_config(c: Config) -> Tree:
    return cons(encode_stmts(c.control), encode_store(c.store))


def decode_config(t: Tree) -> Config:
    control, store = _pair(t, "configuration")
    return Config(decode_stmts(control), decode_store(store))


def encode_trace(tr: Trace) -> Tree:
    t = NIL
    for c in reversed(tr.configs):
        t = cons(encode_config(c), t)
    return t


def decode_trace(t: Tree) -> Trace:
    """Inverse of :func:`encode_trace`. Step-relatedness is not checked here."""
    configs = []
    while t.left is not None:
        configs.append(decode_config(t.left))
        t = t.right
    if not configs:
        raise DecodeError("malformed trace: empty")
    return Trace(tuple(configs))


def concat_trace_codes(first: Tree, second: Tree) -> Tree:
    """Code of ``decode_trace(first).then(decode_trace(second))``."""
    items = []
    while first.left is not None:
        items.append(first.left)
        first = first.right
    if not items or second.left is not items[-1]:
        raise DecodeError("trace codes do not meet at a common configuration")
    return from_list(items[:-1], second)
