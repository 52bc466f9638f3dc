"""Small-step semantics with exact time and space accounting.

A configuration is a control continuation (the statements still to run)
plus a store. Stores are tuples indexed by variable number with trailing
``NIL`` entries stripped, so unset variables read as ``NIL`` and equal
configurations have equal representations.

Cost rule: an executed ``:=``/``while``/``if`` costs one for the statement
plus one per expression node it evaluates. ``split``/``join`` are
administrative and cost nothing.
"""

from __future__ import annotations

import contextlib
import gc
import math
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Iterator, Union

from .syntax import (
    Assign, ConsE, EqAtom, Expr, Hd, If, JoinPair, NilLit, Program, SplitPair,
    Stmt, Tl, Var, While, print_stmts,
)
from .tree import NIL, TRUE, Tree, cons, format_tree

Store = tuple[Tree, ...]
Fuel = Union[int, float]

INF = math.inf


@dataclass(frozen=True)
class CostModel:
    statement: int = 1
    expr_node: int = 1
    admin: int = 0


DEFAULT_COSTS = CostModel()
_costs: ContextVar[CostModel] = ContextVar("moncomp_costs", default=DEFAULT_COSTS)


@contextlib.contextmanager
def cost_model(model: CostModel) -> Iterator[CostModel]:
    """Temporarily evaluate under a different cost model (mutation testing)."""
    token = _costs.set(model)
    try:
        yield model
    finally:
        _costs.reset(token)


def current_costs() -> CostModel:
    return _costs.get()


# -- stores -------------------------------------------------------------------

def store_get(store: Store, k: int) -> Tree:
    return store[k] if k < len(store) else NIL


def store_set(store: Store, k: int, v: Tree) -> Store:
    if k < len(store):
        out = list(store)
        out[k] = v
    elif v is NIL:
        return store
    else:
        out = list(store) + [NIL] * (k - len(store)) + [v]
    while out and out[-1] is NIL:
        out.pop()
    return tuple(out)


def make_store(mapping: dict[int, Tree]) -> Store:
    store: Store = ()
    for k, v in sorted(mapping.items()):
        store = store_set(store, k, v)
    return store


def store_size(store: Store) -> int:
    return sum(v.size for v in store)


@dataclass(frozen=True)
class Config:
    control: tuple[Stmt, ...]
    store: Store

    @property
    def terminal(self) -> bool:
        return not self.control

    @property
    def space(self) -> int:
        return store_size(self.store)

    def __str__(self) -> str:
        cells = ", ".join(f"X{k}={format_tree(v)}" for k, v in enumerate(self.store) if v is not NIL)
        return f"<{print_stmts(self.control)} | {cells}>"


def initial_config(program: Program, value: Tree) -> Config:
    return Config(program.body, store_set((), 0, value))


# -- evaluation ---------------------------------------------------------------

def eval_expr(e: Expr, store: Store) -> Tree:
    if isinstance(e, Var):
        return store[e.index] if e.index < len(store) else NIL
    if isinstance(e, NilLit):
        return NIL
    if isinstance(e, ConsE):
        return cons(eval_expr(e.left, store), eval_expr(e.right, store))
    if isinstance(e, Hd):
        v = eval_expr(e.arg, store)
        return NIL if v.left is None else v.left
    if isinstance(e, Tl):
        v = eval_expr(e.arg, store)
        return NIL if v.right is None else v.right
    if isinstance(e, EqAtom):
        return TRUE if eval_expr(e.left, store) is eval_expr(e.right, store) else NIL
    raise TypeError(f"not an expression: {e!r}")


def step(config: Config, costs: CostModel | None = None) -> tuple[Config | None, int]:
    """One transition. Returns ``(None, 0)`` on a terminal configuration."""
    if not config.control:
        return None, 0
    c = costs or _costs.get()
    s = config.control[0]
    rest = config.control[1:]
    store = config.store
    if isinstance(s, Assign):
        v = eval_expr(s.expr, store)
        return Config(rest, store_set(store, s.var, v)), c.statement + c.expr_node * s.expr.nodes
    if isinstance(s, While):
        cost = c.statement + c.expr_node * s.cond.nodes
        if eval_expr(s.cond, store).left is not None:
            return Config(s.body + (s,) + rest, store), cost
        return Config(rest, store), cost
    if isinstance(s, If):
        cost = c.statement + c.expr_node * s.cond.nodes
        branch = s.then if eval_expr(s.cond, store).left is not None else s.orelse
        return Config(branch + rest, store), cost
    if isinstance(s, SplitPair):
        v = store_get(store, s.src)
        store = store_set(store, s.left, v.hd)
        store = store_set(store, s.right, v.tl)
        return Config(rest, store), c.admin
    if isinstance(s, JoinPair):
        v = cons(store_get(store, s.left), store_get(store, s.right))
        return Config(rest, store_set(store, s.dst, v)), c.admin
    raise TypeError(f"not a statement: {s!r}")


# -- traces and outcomes ------------------------------------------------------

@dataclass(frozen=True)
class Trace:
    configs: tuple[Config, ...]

    def __post_init__(self):
        if not self.configs:
            raise ValueError("a trace has at least one configuration")

    @property
    def complete(self) -> bool:
        return self.configs[-1].terminal

    @property
    def first(self) -> Config:
        return self.configs[0]

    @property
    def last(self) -> Config:
        return self.configs[-1]

    @property
    def space(self) -> int:
        return max(cfg.space for cfg in self.configs)

    def step_costs(self) -> list[int]:
        """Recompute each transition's cost by replaying ``step``.

        Raises ValueError if two adjacent configurations are not related
        by the transition function.
        """
        costs = []
        for a, b in zip(self.configs, self.configs[1:]):
            nxt, cost = step(a)
            if nxt != b:
                raise ValueError("configurations are not step-related")
            costs.append(cost)
        return costs

    @property
    def time(self) -> int:
        return sum(self.step_costs())

    def with_suffix(self, suffix: tuple[Stmt, ...]) -> Trace:
        """The same run embedded in a context that continues with ``suffix``."""
        return Trace(tuple(Config(c.control + suffix, c.store) for c in self.configs))

    def then(self, other: Trace) -> Trace:
        """Glue two traces sharing the boundary configuration.

        Associative, with any one-configuration trace as a unit at its
        configuration.
        """
        if self.last != other.first:
            raise ValueError("traces do not meet at a common configuration")
        return Trace(self.configs + other.configs[1:])


@dataclass(frozen=True)
class Halted:
    value: Tree
    time: int
    space: int
    trace: Trace

    halted = True

    def to_json(self, with_trace: bool = True) -> dict:
        out = {"halted": True, "value": format_tree(self.value), "time": self.time, "space": self.space}
        if with_trace:
            out["trace"] = trace_json(self.trace)
        return out


@dataclass(frozen=True)
class OutOfFuel:
    steps_done: int
    partial: Trace

    halted = False
    value = None

    def to_json(self, with_trace: bool = True) -> dict:
        out = {"halted": False, "value": None, "time": None, "space": None,
               "steps_done": self.steps_done}
        if with_trace:
            out["trace"] = trace_json(self.partial)
        return out


Outcome = Union[Halted, OutOfFuel]


def trace_json(trace: Trace) -> list[dict]:
    return [{"control": print_stmts(c.control),
             "store": {f"X{k}": format_tree(v) for k, v in enumerate(c.store) if v is not NIL}}
            for c in trace.configs]


def as_fuel(fuel) -> Fuel:
    """Normalise a budget: int, ``math.inf``/``None`` or a natural-number Grade."""
    if fuel is None:
        return INF
    value = getattr(fuel, "value", fuel)
    if value == INF or getattr(value, "is_inf", False):
        return INF
    if isinstance(value, int) and value >= 0:
        return value
    raise ValueError(f"invalid fuel {fuel!r}")


@contextlib.contextmanager
def _cycle_gc_paused():
    # configurations and trees never form reference cycles, so reference
    # counting frees them; the cyclic collector would only rescan every
    # long-lived object each time a long run promotes a batch of configs
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def run_config(config: Config, fuel=INF) -> Outcome:
    """Iterate ``step`` from ``config`` while the accumulated cost stays within fuel."""
    with _cycle_gc_paused():
        return _run_config(config, fuel)


def _run_config(config: Config, fuel) -> Outcome:
    budget = as_fuel(fuel)
    costs = _costs.get()
    configs = [config]
    time = 0
    space = config.space
    while config.control:
        nxt, cost = step(config, costs)
        if time + cost > budget:
            return OutOfFuel(len(configs) - 1, Trace(tuple(configs)))
        time += cost
        config = nxt
        configs.append(config)
        sp = config.space
        if sp > space:
            space = sp
    value = config.store[0] if config.store else NIL
    return Halted(value, time, space, Trace(tuple(configs)))


def run(program: Program, value: Tree, fuel=INF) -> Outcome:
    """Run ``program`` on ``value``; ``fuel=inf`` is the unbounded evaluator."""
    return run_config(initial_config(program, value), fuel)
