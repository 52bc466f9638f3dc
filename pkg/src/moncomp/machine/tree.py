"""Hash-consed binary trees, the single value universe of the machine.

Every tree is built through :func:`cons`, which returns the unique shared
node for a given pair of children. Structural equality is therefore object
identity, ``eq?`` is O(1), and hashing is cheap.

>>> t = cons(NIL, cons(NIL, NIL))
>>> t is cons(NIL, cons(NIL, NIL))
True
>>> print(t)
(() . (() . ()))
>>> nat_value(nat(3))
3
"""

from __future__ import annotations

import re
import weakref
from typing import Iterable, Iterator


class Tree:
    """A binary tree node; ``NIL`` is the only leaf.

    Do not instantiate directly, use :data:`NIL` and :func:`cons`.
    """

    __slots__ = ("left", "right", "size", "__weakref__")

    left: Tree | None
    right: Tree | None
    size: int

    @property
    def is_nil(self) -> bool:
        return self.left is None

    def __bool__(self) -> bool:
        return self.left is not None

    def __repr__(self) -> str:
        return f"Tree({format_tree(self)})"

    def __str__(self) -> str:
        return format_tree(self)

    def __reduce__(self):
        return (parse_tree, (format_tree(self),))

    @property
    def hd(self) -> Tree:
        return NIL if self.left is None else self.left

    @property
    def tl(self) -> Tree:
        return NIL if self.right is None else self.right


def _make_nil() -> Tree:
    t = object.__new__(Tree)
    t.left = None
    t.right = None
    t.size = 0
    return t


NIL: Tree = _make_nil()

_table: weakref.WeakValueDictionary = weakref.WeakValueDictionary()


def cons(left: Tree, right: Tree) -> Tree:
    """Return the shared node with the given children.

    ``size`` counts Cons nodes, so ``NIL.size == 0``.
    """
    key = (id(left), id(right))
    node = _table.get(key)
    if node is None:
        node = object.__new__(Tree)
        node.left = left
        node.right = right
        node.size = left.size + right.size + 1
        _table[key] = node
    return node


TRUE: Tree = cons(NIL, NIL)
FALSE: Tree = NIL


def nat(k: int) -> Tree:
    """Unary numeral: ``nat(0) = ()``, ``nat(k+1) = (() . nat(k))``."""
    if k < 0:
        raise ValueError(f"negative numeral {k}")
    t = NIL
    for _ in range(k):
        t = cons(NIL, t)
    return t


def nat_value(t: Tree) -> int:
    """Inverse of :func:`nat`; raises ValueError outside its image."""
    k = 0
    while t.left is not None:
        if t.left is not NIL:
            raise ValueError("not a unary numeral")
        k += 1
        t = t.right
    return k


def is_nat(t: Tree) -> bool:
    while t.left is not None:
        if t.left is not NIL:
            return False
        t = t.right
    return True


def from_list(items: Iterable[Tree], tail: Tree = NIL) -> Tree:
    t = tail
    for item in reversed(list(items)):
        t = cons(item, t)
    return t


def iter_list(t: Tree) -> Iterator[Tree]:
    """Yield the elements of a Cons-list, ignoring whatever ends the spine."""
    while t.left is not None:
        yield t.left
        t = t.right


def to_list(t: Tree) -> list[Tree]:
    """Elements of a proper Cons-list; ValueError if the spine is improper."""
    out = []
    while t.left is not None:
        out.append(t.left)
        t = t.right
    if t is not NIL:
        raise ValueError("improper list")
    return out


def format_tree(t: Tree) -> str:
    """Render as nested dotted pairs without recursion."""
    out: list[str] = []
    stack: list[Tree | str] = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif item.left is None:
            out.append("()")
        else:
            out.append("(")
            stack.append(")")
            stack.append(item.right)
            stack.append(" . ")
            stack.append(item.left)
    return "".join(out)


class TreeSyntaxError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(\(|\)|\.|nil\b)")


def parse_tree(text: str) -> Tree:
    """Parse ``()``, ``nil`` or ``(t . t)``.

    >>> parse_tree("(() . nil)") is cons(NIL, NIL)
    True
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TreeSyntaxError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        tokens.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    # explicit stack: each frame is [stage, left]
    result: list[Tree] = []
    frames: list[list] = []
    i = 0

    def need(tok: str) -> None:
        nonlocal i
        if i >= len(tokens) or tokens[i] != tok:
            got = tokens[i] if i < len(tokens) else "end of input"
            raise TreeSyntaxError(f"expected {tok!r}, got {got!r}")
        i += 1

    while True:
        # parse one value, pushing frames for open pairs
        if i >= len(tokens):
            raise TreeSyntaxError("unexpected end of input")
        tok = tokens[i]
        if tok == "nil":
            i += 1
            value = NIL
        elif tok == "(":
            if i + 1 < len(tokens) and tokens[i + 1] == ")":
                i += 2
                value = NIL
            else:
                i += 1
                frames.append([0, None])
                continue
        else:
            raise TreeSyntaxError(f"unexpected {tok!r}")
        # reduce finished values into enclosing frames
        while frames:
            frame = frames[-1]
            if frame[0] == 0:
                frame[0], frame[1] = 1, value
                need(".")
                break
            need(")")
            frames.pop()
            value = cons(frame[1], value)
        else:
            result.append(value)
            break
    if i != len(tokens):
        raise TreeSyntaxError(f"trailing input after tree: {tokens[i]!r}")
    return result[0]
