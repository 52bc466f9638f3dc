"""Random programs, inputs and on-disk corpora.

Generated programs have at most 40 AST nodes and use ``X0``..``X3``.
Three families are drawn:

``halting``
    every loop has the shape ``while Xk { ...; Xk := tl Xk }`` with a body
    that never writes ``Xk`` (or the counters of enclosing loops), so each
    loop runs at most as often as its counter is long on entry.
``divergent``
    ``X4 := cons(nil, nil); while X4 { ... }`` with a body not touching
    ``X4``, after a halting prefix.
``free``
    unconstrained loops; may or may not halt.

A corpus directory holds ``programs/*.while``, ``inputs/*.tree`` and a
``manifest.json`` listing entries ``{"id", "program", "input", "expected",
"fuel"}``; ``input`` names a file under ``inputs/`` or is a tree literal.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from pathlib import Path

from . import grading
from .grading import Grade
from .machine.interp import run
from .machine.syntax import (
    Assign, ConsE, EqAtom, Expr, Hd, If, JoinPair, NIL_EXPR, Program, SplitPair, Stmt, Tl, Var,
    While, parse_program, print_program,
)
from .machine.tree import NIL, Tree, cons, format_tree, nat, parse_tree

MAX_NODES = 40
NUM_VARS = 4
LOOP_GUARD = 4

BUNDLED_CORPUS = Path(__file__).with_name("data") / "corpus"


# -- trees --------------------------------------------------------------------

def random_tree(rng: random.Random, max_size: int = 6) -> Tree:
    """A tree with at most ``max_size`` Cons nodes, built by random splitting."""
    n = rng.randint(0, max_size)

    def build(n: int) -> Tree:
        if n == 0:
            return NIL
        k = rng.randint(0, n - 1)
        return cons(build(k), build(n - 1 - k))

    return build(n)


def random_input(rng: random.Random) -> Tree:
    """Mixed inputs: general trees, numerals and pairs of numerals."""
    r = rng.random()
    if r < 0.4:
        return random_tree(rng, 6)
    if r < 0.7:
        return nat(rng.randint(0, 6))
    return cons(nat(rng.randint(0, 5)), nat(rng.randint(0, 5)))


# -- programs -----------------------------------------------------------------

class _Gen:
    def __init__(self, rng: random.Random, budget: int, family: str):
        self.rng = rng
        self.budget = budget
        self.family = family

    def var(self) -> int:
        return self.rng.randrange(NUM_VARS)

    def expr(self, depth: int = 2) -> Expr:
        rng = self.rng
        if depth == 0 or self.budget <= 2 or rng.random() < 0.45:
            self.budget -= 1
            return NIL_EXPR if rng.random() < 0.2 else Var(self.var())
        self.budget -= 1
        kind = rng.choice(["cons", "cons", "hd", "tl", "tl", "eq"])
        if kind == "hd":
            return Hd(self.expr(depth - 1))
        if kind == "tl":
            return Tl(self.expr(depth - 1))
        left = self.expr(depth - 1)
        right = self.expr(depth - 1)
        return ConsE(left, right) if kind == "cons" else EqAtom(left, right)

    def writable(self, protected: frozenset[int]) -> int | None:
        choices = [k for k in range(NUM_VARS) if k not in protected]
        return self.rng.choice(choices) if choices else None

    def stmt(self, protected: frozenset[int], depth: int) -> Stmt | None:
        rng = self.rng
        r = rng.random()
        target = self.writable(protected)
        if target is None:
            return None
        if depth > 0 and r < 0.22 and self.budget >= 8:
            return self.loop(protected, depth)
        if depth > 0 and r < 0.34 and self.budget >= 6:
            self.budget -= 1
            cond = self.expr(1)
            then = self.block(protected, depth - 1, 2)
            orelse = self.block(protected, depth - 1, 2) if rng.random() < 0.5 else ()
            return If(cond, then, orelse)
        if r < 0.44:
            self.budget -= 1
            src = self.var()
            a, b = self.writable(protected), self.writable(protected)
            return SplitPair(src, a, b)
        if r < 0.52:
            self.budget -= 1
            return JoinPair(self.var(), self.var(), target)
        self.budget -= 1
        return Assign(target, self.expr())

    def loop(self, protected: frozenset[int], depth: int) -> Stmt:
        self.budget -= 1
        if self.family == "free":
            cond = self.expr(1)
            return While(cond, self.block(protected, depth - 1, 3))
        k = self.writable(protected)
        inner = protected | {k}
        self.budget -= 3  # the counter decrement
        body = self.block(inner, depth - 1, 3)
        cond: Expr = Var(k)
        return While(cond, body + (Assign(k, Tl(Var(k))),))

    def block(self, protected: frozenset[int], depth: int, max_len: int) -> tuple[Stmt, ...]:
        out = []
        for _ in range(self.rng.randint(1, max_len)):
            if self.budget <= 2:
                break
            s = self.stmt(protected, depth)
            if s is not None:
                out.append(s)
        return tuple(out)


def random_program(rng: random.Random, family: str = "halting", max_nodes: int = MAX_NODES) -> Program:
    """A random program of the given family with at most ``max_nodes`` AST nodes."""
    if family not in ("halting", "divergent", "free"):
        raise ValueError(f"unknown program family {family!r}")
    while True:
        if family == "divergent":
            gen = _Gen(rng, max_nodes - 12, "halting")
            prefix = gen.block(frozenset(), 1, 2)
            gen.budget = max(4, gen.budget)
            body = gen.block(frozenset({LOOP_GUARD}), 1, 2)
            p = Program(prefix + (Assign(LOOP_GUARD, ConsE(NIL_EXPR, NIL_EXPR)),
                                  While(Var(LOOP_GUARD), body)))
        else:
            gen = _Gen(rng, max_nodes, family)
            p = Program(gen.block(frozenset(), 2, 6))
        if 0 < p.ast_size <= max_nodes:
            return p


# -- corpus files -------------------------------------------------------------

@dataclass(frozen=True)
class CorpusEntry:
    id: str
    program: Program
    input: Tree
    expected: Tree | None = None
    fuel: Grade | None = None
    program_path: str | None = None

    def to_json(self) -> dict:
        return {"id": self.id, "program": self.program_path, "input": format_tree(self.input),
                "expected": None if self.expected is None else format_tree(self.expected),
                "fuel": None if self.fuel is None else self.fuel.to_json()["value"]}


class CorpusError(ValueError):
    pass


def _fuel(value) -> Grade | None:
    if value is None:
        return None
    return grading.nat(grading.INF if value == "inf" else int(value))


def load_corpus(directory: str | os.PathLike) -> list[CorpusEntry]:
    """Read a corpus directory; checks that programs parse and expectations hold."""
    root = Path(directory)
    manifest = root / "manifest.json"
    if not manifest.exists():
        raise CorpusError(f"{manifest} not found")
    entries = []
    for rec in json.loads(manifest.read_text())["entries"]:
        prog_path = root / rec["program"]
        program = parse_program(prog_path.read_text())
        raw = rec["input"]
        text = (root / "inputs" / raw).read_text() if raw.endswith(".tree") else raw
        entry = CorpusEntry(rec["id"], program, parse_tree(text),
                            None if rec.get("expected") is None else parse_tree(rec["expected"]),
                            _fuel(rec.get("fuel")), rec["program"])
        if entry.expected is not None:
            out = run(entry.program, entry.input, entry.fuel)
            if not out.halted or out.value is not entry.expected:
                raise CorpusError(f"entry {entry.id}: expected value does not match the run")
        entries.append(entry)
    return entries


def write_corpus(directory: str | os.PathLike, entries: list[CorpusEntry]) -> None:
    root = Path(directory)
    (root / "programs").mkdir(parents=True, exist_ok=True)
    (root / "inputs").mkdir(exist_ok=True)
    records = []
    for e in entries:
        (root / "programs" / f"{e.id}.while").write_text(print_program(e.program) + "\n")
        (root / "inputs" / f"{e.id}.tree").write_text(format_tree(e.input) + "\n")
        rec = e.to_json()
        rec["program"] = f"programs/{e.id}.while"
        rec["input"] = f"{e.id}.tree"
        records.append(rec)
    (root / "manifest.json").write_text(json.dumps({"entries": records}, indent=1) + "\n")


def default_corpus_path() -> Path:
    return Path(os.environ.get("MONCOMP_CORPUS") or BUNDLED_CORPUS)


def generate_corpus(seed: int, count: int, divergent_share: float = 0.15,
                    fuel_cap: int = 20_000) -> list[CorpusEntry]:
    """Seeded corpus; halting entries carry their expected value."""
    rng = random.Random(seed)
    entries = []
    for i in range(count):
        divergent = rng.random() < divergent_share
        p = random_program(rng, "divergent" if divergent else "halting")
        a = random_input(rng)
        out = run(p, a, fuel_cap)
        if divergent:
            entries.append(CorpusEntry(f"d{i:03d}", p, a, None, grading.nat(1000)))
        elif out.halted:
            entries.append(CorpusEntry(f"h{i:03d}", p, a, out.value, grading.nat(fuel_cap)))
    return entries
