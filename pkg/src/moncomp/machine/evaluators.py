"""Evaluators, partial evaluators and morphisms of the standard model.

Everything that only moves data around (quoting a literal, pairing,
clearing scratch variables) is written with ``split``/``join`` so it costs
nothing; only genuine computation is charged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Generic, TypeVar

from .. import grading
from ..grading import Grade
from .codec import (
    DecodeError, decode_config, decode_program, decode_trace, encode_config,
    encode_program, encode_trace,
)
from .interp import (
    Halted, OutOfFuel, Outcome, Trace, as_fuel, initial_config, run, run_config, step,
)
from .syntax import JoinPair, Program, SplitPair, Stmt, parse_program, program_vars, rename_vars
from .tree import FALSE, NIL, TRUE, Tree, cons, nat, nat_value


class ExtractionError(ValueError):
    """The tree is not the code of a complete trace."""


def outcome_key(o: Outcome) -> tuple:
    """What two runs must share to count as the same partial-function result."""
    return (o.halted, o.value, o.time if o.halted else None)


# -- quoting ------------------------------------------------------------------

def clear_vars(indices, nil_var: int) -> tuple[Stmt, ...]:
    """Reset each variable to nil by splitting a variable that is always nil."""
    return tuple(SplitPair(nil_var, k, k) for k in sorted(indices))


def build_literal(value: Tree, first_free: int) -> tuple[tuple[Stmt, ...], int, list[int]]:
    """Statements that build ``value`` with joins alone.

    Returns ``(stmts, var, temps)``: after ``stmts`` the variable ``var``
    holds ``value``. ``first_free`` must be a variable that is never
    written (it serves as the nil source); temporaries come after it.
    Shared subtrees are built once.
    """
    nil_var = first_free
    if value is NIL:
        return (), nil_var, []
    slot: dict[Tree, int] = {NIL: nil_var}
    stmts: list[Stmt] = []
    temps: list[int] = []
    stack: list[tuple[Tree, bool]] = [(value, False)]
    while stack:
        t, ready = stack.pop()
        if t in slot:
            continue
        if ready:
            k = first_free + 1 + len(temps)
            temps.append(k)
            stmts.append(JoinPair(slot[t.left], slot[t.right], k))
            slot[t] = k
        else:
            stack.append((t, True))
            stack.append((t.right, False))
            stack.append((t.left, False))
    return tuple(stmts), slot[value], temps


def constant_program(value: Tree) -> Program:
    """A program ignoring its input and returning ``value`` at zero cost."""
    stmts, var, temps = build_literal(value, 1)
    # pair with nil, then split off the head: X0 := var without an Assign
    tail = (JoinPair(var, 1, 0), SplitPair(0, 0, 1))
    return Program(stmts + tail + clear_vars(temps, 1))


# -- partial evaluation and the normal-form pieces ----------------------------

def specialize(f: Program, a: Tree) -> Program:
    """``f`` with its first argument fixed to ``a``: on ``b`` it behaves as ``f`` on ``(a . b)``."""
    first_free = f.max_var + 1
    stmts, var, temps = build_literal(a, first_free)
    prelude = stmts + (JoinPair(var, 0, 0),) + clear_vars(temps, first_free)
    return Program(prelude + f.body)


def smn(f_code: Tree, a: Tree) -> Tree:
    """Code of :func:`specialize` applied to the decoded program; zero cost prelude."""
    return encode_program(specialize(decode_program(f_code), a))


def suspend(f_code: Tree, a: Tree) -> Tree:
    """Code of the initial configuration of the program ``f_code`` on ``a``."""
    return encode_config(initial_config(decode_program(f_code), a))


def trace_eval(susp: Tree, budget=grading.INF_NAT) -> Tree | None:
    """Run a suspended configuration; the complete trace code, or None if the budget runs out."""
    out = run_config(decode_config(susp), budget)
    return encode_trace(out.trace) if out.halted else None


def extract_output(trace_code: Tree) -> Tree:
    """Final ``X0`` of a complete trace."""
    try:
        trace = decode_trace(trace_code)
    except DecodeError as exc:
        raise ExtractionError(str(exc)) from None
    if not trace.complete:
        raise ExtractionError("trace is not complete")
    store = trace.last.store
    return store[0] if store else NIL


# -- composition --------------------------------------------------------------

def seq_compose(p: Program, q: Program) -> Program:
    """Run ``p`` then ``q`` on its output; scratch variables of ``p`` are cleared for free."""
    nil_var = max(p.max_var, q.max_var) + 1
    used = program_vars(p) - {0}
    return Program(p.body + clear_vars(used, nil_var) + q.body)


def par_compose(p: Program, q: Program) -> Program:
    """On ``(a . b)`` return ``(p(a) . q(b))``; ``q`` runs in variables shifted past ``p``'s."""
    offset = p.max_var + 1
    q_shift = rename_vars(q, lambda k: k + offset)
    nil_var = offset + q.max_var + 1
    scratch = (program_vars(p) | program_vars(q_shift)) - {0}
    return Program((SplitPair(0, 0, offset),) + p.body + q_shift.body
                   + (JoinPair(0, offset, 0),) + clear_vars(scratch, nil_var))


EMPTY = Program(())


def seq_trace_parts(p: Program, q: Program, a: Tree) -> tuple[Trace, Trace, Trace] | None:
    """The three segments of a halting ``seq_compose(p, q)`` run on ``a``.

    The first is ``p``'s trace in the composite's context, the second the
    zero-cost clearing, the third ``q``'s own trace. None if ``p`` or ``q``
    does not halt.
    """
    comp = seq_compose(p, q)
    rp = run(p, a)
    rq = run(q, rp.value) if rp.halted else None
    if rq is None or not rq.halted:
        return None
    glue = comp.body[len(p.body):len(comp.body) - len(q.body)]
    first = rp.trace.with_suffix(glue + q.body)
    configs = [first.last]
    for _ in glue:
        configs.append(step(configs[-1])[0])
    return first, Trace(tuple(configs)), rq.trace


# -- budgeted morphisms -------------------------------------------------------

@dataclass(frozen=True)
class Morphism:
    """A program together with the grade at which it is clocked out."""

    program: Program
    budget: Grade = grading.INF_NAT

    def __post_init__(self):
        if self.budget.monoid is not grading.Monoid.NAT:
            raise grading.GradingError("morphism budgets are completed naturals")

    def __call__(self, a: Tree) -> Outcome:
        return run(self.program, a, self.budget)

    def code(self) -> Tree:
        return encode_program(self.program)


def restrict(m: Morphism, n: Grade) -> Morphism:
    return Morphism(m.program, grading.meet(m.budget, n))


def compose(f: Morphism, g: Morphism) -> Morphism:
    """``f`` then ``g``; budgets add."""
    return Morphism(seq_compose(f.program, g.program), grading.oplus(f.budget, g.budget))


def tensor(f: Morphism, g: Morphism) -> Morphism:
    return Morphism(par_compose(f.program, g.program), grading.oplus(f.budget, g.budget))


COPY = Program((JoinPair(0, 0, 0),))
DELETE = Program((SplitPair(1, 0, 1),))
# loops unless both halves agree; the equality test itself is charged
COMPARE = parse_program("""
    split X0 into (X0, X2);
    while eq?(eq?(X0, X2), nil) { X2 := X2 };
    split X1 into (X2, X2)
""")


def data_service_morphisms(kind: str) -> Morphism:
    """``copy`` and ``delete`` at grade 0; ``compare`` is charged and diverges on unequal pairs."""
    if kind == "copy":
        return Morphism(COPY, grading.ZERO_NAT)
    if kind == "delete":
        return Morphism(DELETE, grading.ZERO_NAT)
    if kind == "compare":
        return Morphism(COMPARE, grading.INF_NAT)
    raise ValueError(f"unknown data service {kind!r}")


# -- retractions --------------------------------------------------------------

V = TypeVar("V")


@dataclass(frozen=True)
class Retraction(Generic[V]):
    """``decode(encode(v)) == (v, True)``; trees outside the image decode to ``(default, False)``."""

    name: str
    encode: Callable[[V], Tree]
    _decode: Callable[[Tree], V]
    default: V

    def decode(self, t: Tree) -> tuple[V, bool]:
        try:
            v = self._decode(t)
        except (ValueError, DecodeError):
            return self.default, False
        if self.encode(v) is not t:
            return self.default, False
        return v, True

    def project(self, t: Tree) -> Tree:
        """The idempotent on trees: in-image trees are fixed, the rest go to the default's code."""
        return self.encode(self.decode(t)[0])


def _decode_bool(t: Tree) -> bool:
    if t is TRUE:
        return True
    if t is FALSE:
        return False
    raise ValueError("not a boolean")


def _decode_pair(t: Tree) -> tuple[Tree, Tree]:
    if t.left is None:
        raise ValueError("not a pair")
    return t.left, t.right


_RETRACTS = {
    "bool": Retraction("bool", lambda b: TRUE if b else FALSE, _decode_bool, False),
    "nat": Retraction("nat", nat, nat_value, 0),
    "pair": Retraction("pair", lambda p: cons(p[0], p[1]), _decode_pair, (NIL, NIL)),
    "trace": Retraction("trace", encode_trace, decode_trace, Trace((initial_config(EMPTY, NIL),))),
    "program": Retraction("program", encode_program, decode_program, EMPTY),
}


def retract(type_tag: str) -> Retraction:
    try:
        return _RETRACTS[type_tag]
    except KeyError:
        raise ValueError(f"unknown retract {type_tag!r}") from None


# -- programs as morphisms ----------------------------------------------------

def gamma(h_code: Tree) -> Morphism:
    """The morphism that on ``(x . a)`` runs ``h`` on ``x`` and then the program it returns on ``a``.

    The dispatch goes through the self-interpreter, so the result is an
    ordinary program; codes that do not decode make it return nil.
    """
    from .universal import universal_program

    h = decode_program(h_code)
    return Morphism(seq_compose(par_compose(h, EMPTY), universal_program()))


def program_of(m: Morphism) -> Tree:
    """The code of a morphism's own program; ``gamma`` of its constant program recovers it."""
    return m.code()


def gamma_apply(h_code: Tree, x: Tree, a: Tree, fuel=grading.INF_NAT) -> Outcome:
    """Meta-level dispatch: run ``h`` on ``x``, decode its output, run that on ``a``.

    Time is the sum of both stages. Raises :class:`DecodeError` if ``h``'s
    output is not a program code.
    """
    budget = as_fuel(fuel)
    first = run(decode_program(h_code), x, budget)
    if not first.halted:
        return first
    f = decode_program(first.value)
    second = run(f, a, budget - first.time)
    if not second.halted:
        return OutOfFuel(len(first.trace.configs) - 1 + second.steps_done, second.partial)
    return Halted(second.value, first.time + second.time, max(first.space, second.space),
                  second.trace)
