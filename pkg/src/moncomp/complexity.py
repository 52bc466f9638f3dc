"""Normal form, trace search and complexity measures.

The normal form of evaluation is ``u_n = suspend ; trace_eval_n ; extract``:
package the initial configuration, produce the complete trace within the
budget, read the output off its last configuration. The trace predicate
``kleene_T`` is decidable, so the trace can also be found by blind search
over all trees (:func:`mu_search_naive`).

A :class:`Measure` reads a grade off a trace code (``kappa_star``), embeds
grades back into trees (``kappa_lower``) and compares them (``order``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np
from scipy.optimize import linprog

from . import grading
from .grading import Grade
from .machine.codec import DecodeError, decode_program, decode_trace, encode_config
from .machine.evaluators import extract_output, seq_compose, suspend, trace_eval
from .machine.interp import Config, Trace, as_fuel, initial_config, run, step
from .machine.syntax import Program, parse_program
from .machine.tree import NIL, TRUE, Tree, cons, is_nat, nat, nat_value
from .machine.universal import counting_universal_program, space_universal_program

INF_MARKER = cons(TRUE, TRUE)


# -- the trace predicate and search -------------------------------------------

class TracePredicate:
    """``x -> kleene_T(F, a, x)`` with the program decoded once.

    Rejection is cheap for almost all trees: the head of ``x`` must be the
    very tree that codes the initial configuration.
    """

    def __init__(self, f_code: Tree, a: Tree):
        try:
            self.program: Program | None = decode_program(f_code)
        except DecodeError:
            self.program = None
            self.start = None
        else:
            self.start = encode_config(initial_config(self.program, a))

    def __call__(self, x: Tree) -> bool:
        if self.start is None or x.left is not self.start:
            return False
        try:
            trace = decode_trace(x)
        except DecodeError:
            return False
        if not trace.complete:
            return False
        for c, d in zip(trace.configs, trace.configs[1:]):
            if step(c)[0] != d:
                return False
        return True


def kleene_T(f_code: Tree, a: Tree, x: Tree) -> bool:
    """Whether ``x`` codes the complete run of the program ``f_code`` on ``a``."""
    return TracePredicate(f_code, a)(x)


# small sizes are enumerated over and over, so they are kept; larger ones
# are regenerated, since holding them all would burden the garbage collector
_CACHE_SIZES = 10
_exact_cache: dict[int, list[Tree]] = {0: [NIL]}
_upto_cache: dict[int, list[Tree]] = {0: [NIL]}


def _upto(m: int) -> Iterable[Tree]:
    """All trees of size <= m in lexicographic order (Nil < Cons, left first)."""
    if m in _upto_cache:
        return _upto_cache[m]
    out = _upto_gen(m)
    if m <= _CACHE_SIZES:
        out = _upto_cache[m] = list(out)
    return out


def _upto_gen(m: int) -> Iterator[Tree]:
    yield NIL
    for left in _upto(m - 1):
        for right in _upto(m - 1 - left.size):
            yield cons(left, right)


def trees_of_size(n: int) -> Iterator[Tree]:
    """Trees with exactly ``n`` Cons nodes, in lexicographic order."""
    if n in _exact_cache:
        yield from _exact_cache[n]
        return
    out = [] if n <= _CACHE_SIZES else None
    for left in _upto(n - 1):
        for right in trees_of_size(n - 1 - left.size):
            t = cons(left, right)
            if out is not None:
                out.append(t)
            yield t
    if out is not None:
        _exact_cache[n] = out


def enumerate_trees() -> Iterator[Tree]:
    """Every tree exactly once: by size, then lexicographically."""
    for n in itertools.count():
        yield from trees_of_size(n)


def mu_search_naive(f_code: Tree, a: Tree, candidate_cap: int) -> Tree | None:
    """The first tree in :func:`enumerate_trees` satisfying ``kleene_T``, or None."""
    pred = TracePredicate(f_code, a)
    if pred.start is None:
        return None
    for x in itertools.islice(enumerate_trees(), candidate_cap):
        if pred(x):
            return x
    return None


def mu_search_effective(f_code: Tree, a: Tree, fuel_cap=grading.INF_NAT) -> Tree | None:
    """Produce the trace by running the machine, then check it with ``kleene_T``."""
    try:
        x = trace_eval(suspend(f_code, a), fuel_cap)
    except DecodeError:
        return None
    if x is None:
        return None
    if not kleene_T(f_code, a, x):
        raise AssertionError("machine produced a trace the predicate rejects")
    return x


def normal_form_eval(f_code: Tree, a: Tree, n=grading.INF_NAT) -> Tree | None:
    """``extract_output(trace_eval(suspend(f_code, a), n))``; None where undefined."""
    x = trace_eval(suspend(f_code, a), n)
    return None if x is None else extract_output(x)


# -- measures -----------------------------------------------------------------

def _as_trace(x: Tree) -> Trace | None:
    try:
        trace = decode_trace(x)
        trace.step_costs()
    except (DecodeError, ValueError):
        return None
    return trace


def kappa_lower(m: Grade) -> Tree:
    """Embed a completed natural as a tree: unary numerals, with a marker for infinity."""
    if m.monoid is not grading.Monoid.NAT:
        raise grading.GradingError("measures grade by completed naturals")
    return INF_MARKER if m.is_inf else nat(m.value)


def _kappa_star(read: Callable[[Trace], int]) -> Callable[[Tree], Grade]:
    def kappa_star(x: Tree) -> Grade:
        if x is INF_MARKER:
            return grading.INF_NAT
        if is_nat(x):
            return grading.nat(nat_value(x))
        trace = _as_trace(x)
        return grading.nat(read(trace)) if trace is not None else grading.ZERO_NAT
    return kappa_star


@dataclass(frozen=True)
class Measure:
    name: str
    kappa_star: Callable[[Tree], Grade] = field(repr=False)
    kappa_lower: Callable[[Grade], Tree] = field(repr=False)
    order: Callable[[Grade, Grade], bool] = field(repr=False)


TIME = Measure("time", _kappa_star(lambda tr: tr.time), kappa_lower, grading.leq)
SPACE = Measure("space", _kappa_star(lambda tr: tr.space), kappa_lower, grading.leq)
MEASURES = {"time": TIME, "space": SPACE}


def order_predicate(m: Measure, g1: Grade, g2: Grade) -> bool:
    return m.order(g1, g2)


def measure(m: Measure, f_code: Tree, a: Tree, cap=grading.INF_NAT) -> Grade | None:
    """The grade of the run of ``f_code`` on ``a``; None if it does not halt within ``cap``."""
    x = trace_eval(suspend(f_code, a), cap)
    return None if x is None else m.kappa_star(x)


def blum_halt_agree(f_code: Tree, a: Tree, cap) -> bool:
    """Measure defined within ``cap`` exactly when the run halts within ``cap``."""
    defined = measure(TIME, f_code, a, cap) is not None
    return defined == run(decode_program(f_code), a, cap).halted


def _space_within(config: Config, n: int) -> bool:
    """Whether the run from ``config`` halts without its store ever exceeding ``n``.

    The run is aborted as soon as the store grows past ``n``. Below that
    ceiling there are finitely many configurations, so a non-halting run
    must revisit one; Brent's cycle finder detects that in constant memory.
    """
    if config.space > n:
        return False
    power = lam = 1
    tortoise = hare = config
    while True:
        if not hare.control:
            return True
        hare, _ = step(hare)
        if hare.space > n:
            return False
        if hare == tortoise:
            return False
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        lam += 1


def blum_decide_leq(m: Measure, f_code: Tree, a: Tree, n) -> bool:
    """Decide ``c(F, a) <= n``; always terminates, also when ``F`` diverges."""
    bound = as_fuel(n)
    if bound == float("inf"):
        raise ValueError("the bound must be finite")
    f = decode_program(f_code)
    if m.name == "time":
        return run(f, a, bound).halted
    if m.name == "space":
        return _space_within(initial_config(f, a), bound)
    raise ValueError(f"no decision procedure for measure {m.name!r}")


@dataclass(frozen=True)
class BoundCheck:
    n: int
    decided: bool
    brute: bool


@dataclass(frozen=True)
class BlumReport:
    program: str
    input: str
    fuel_cap: int
    halt_agreement: bool
    bound_checks: tuple[BoundCheck, ...]

    @property
    def ok(self) -> bool:
        return self.halt_agreement and all(b.decided == b.brute for b in self.bound_checks)

    def to_json(self) -> dict:
        return {"program": self.program, "input": self.input, "fuel_cap": self.fuel_cap,
                "halt_agreement": self.halt_agreement, "ok": self.ok,
                "bound_checks": [{"n": b.n, "decided": b.decided, "brute": b.brute}
                                 for b in self.bound_checks]}


def blum_report(m: Measure, f_code: Tree, a: Tree, fuel_cap: int, bounds: Sequence[int]) -> BlumReport:
    """Check both Blum conditions on one program, comparing against a capped brute-force run."""
    from .machine.tree import format_tree
    from .machine.syntax import print_program

    f = decode_program(f_code)
    brute_run = run(f, a, fuel_cap)
    checks = []
    for n in bounds:
        if brute_run.halted:
            value = brute_run.time if m.name == "time" else brute_run.space
            brute = value <= n
        elif m.name == "time":
            brute = False  # time exceeds the cap, which is at least n
        else:
            brute = _brute_space(f, a, n)
        checks.append(BoundCheck(n, blum_decide_leq(m, f_code, a, n), brute))
    return BlumReport(print_program(f), format_tree(a), fuel_cap,
                      blum_halt_agree(f_code, a, fuel_cap), tuple(checks))


def _brute_space(f: Program, a: Tree, n: int) -> bool:
    """Reference decision for space: explicit set of visited configurations."""
    seen = set()
    config = initial_config(f, a)
    while True:
        if config.space > n or config in seen:
            return False
        if not config.control:
            return True
        seen.add(config)
        config = step(config)[0]


# -- normality ----------------------------------------------------------------

_DROP_TOTAL = parse_program("X0 := tl X0")


def measuring_program(m: Measure) -> Program:
    """Program ``C`` computing ``kappa_lower(c(F, a))`` from ``(code . a)``."""
    base = counting_universal_program() if m.name == "time" else space_universal_program()
    return seq_compose(base, _DROP_TOTAL)


@dataclass(frozen=True)
class ChiFit:
    alpha: float
    beta: float

    def bound(self, c: float) -> float:
        return self.alpha * c + self.beta


def fit_chi(points: Sequence[tuple[int, int]]) -> ChiFit:
    """Smallest affine envelope ``alpha*c + beta >= cost`` in total slack (a linear program)."""
    if not points:
        return ChiFit(0.0, 0.0)
    c = np.array([p[0] for p in points], dtype=float)
    t = np.array([p[1] for p in points], dtype=float)
    # minimise sum(alpha*c + beta - t) subject to alpha*c_i + beta >= t_i
    res = linprog([c.sum(), len(c)], A_ub=np.column_stack([-c, -np.ones_like(c)]), b_ub=-t,
                  bounds=[(0, None), (0, None)], method="highs")
    if not res.success:
        raise RuntimeError(f"affine fit failed: {res.message}")
    alpha, beta = res.x
    # tolerate the solver's rounding by lifting the intercept to the largest residual
    beta = max(beta, float(np.max(t - alpha * c)))
    return ChiFit(float(alpha), float(beta))


def _envelope(features: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Non-negative weights ``w`` minimising total slack subject to ``features @ w >= target``."""
    feats, idx = np.unique(np.column_stack([features, target]), axis=0, return_index=True)
    x, y = feats[:, :-1], feats[:, -1]
    res = linprog(x.sum(axis=0), A_ub=-x, b_ub=-y, bounds=[(0, None)] * x.shape[1], method="highs")
    if not res.success:
        raise RuntimeError(f"envelope fit failed: {res.message}")
    w = res.x
    # lift the constant column (last) past any rounding shortfall
    w[-1] += max(0.0, float(np.max(y - x @ w)))
    return w


@dataclass(frozen=True)
class InterpreterProfile:
    """Time of the measuring program on one entry, split by interpreted step.

    ``steps`` pairs each step of the interpreted run with the interpreter
    time spent on it; ``setup`` is the rest (code validation, start-up and
    output), and ``code_size`` the size of the program code.
    """

    steps: tuple[tuple[int, int], ...]
    setup: int
    code_size: int

    @property
    def total(self) -> int:
        return self.setup + sum(u for _, u in self.steps)


def profile_interpreter_run(f_code: Tree, a: Tree, interpreter: Program | None = None) -> InterpreterProfile:
    """Run an interpreter on ``(f_code . a)`` and attribute its time to interpreted steps.

    The default interpreter is the time-measuring program.
    """
    from .machine.interp import store_get
    from .machine.universal import dispatch_points

    prog = measuring_program(TIME) if interpreter is None else interpreter
    out = run(prog, cons(f_code, a))
    direct = run(decode_program(f_code), a)
    entry, exit_stmt, stack_var, stmt_tag = dispatch_points(prog)
    configs = out.trace.configs
    elapsed = [0]
    for c in out.trace.step_costs():
        elapsed.append(elapsed[-1] + c)
    starts, end = [], None
    for i, cfg in enumerate(configs):
        head = cfg.control[0] if cfg.control else None
        if head is entry and store_get(cfg.store, stack_var).left.left is stmt_tag:
            starts.append(i)
        elif head is exit_stmt and end is None:
            end = i
    f_costs = direct.trace.step_costs()
    if end is None or len(starts) != len(f_costs):
        raise RuntimeError("interpreter run does not line up with the direct run")
    bounds = starts + [end]
    steps = tuple((fc, elapsed[j] - elapsed[i]) for fc, i, j in zip(f_costs, bounds, bounds[1:]))
    return InterpreterProfile(steps, out.time - sum(u for _, u in steps), f_code.size)


def max_code_size(max_nodes: int, max_var: int) -> int:
    """Largest code of a program with at most ``max_nodes`` AST nodes over ``X0..X{max_var}``.

    Each node adds its own frame (tag, variable numerals, pairing and list
    cells) to the code; the bound is the header plus ``max_nodes`` times the
    largest frame.
    """
    from .machine.codec import encode_expr, encode_stmt
    from .machine.syntax import (
        Assign, ConsE, EqAtom, Hd, If, JoinPair, NIL_EXPR, SplitPair, Tl, Var, While,
    )

    k, leaf = max_var, NIL_EXPR
    leaf_size = encode_expr(leaf).size
    stmt_frames = [
        encode_stmt(Assign(k, leaf)).size - leaf_size,
        encode_stmt(While(leaf, ())).size - leaf_size,
        encode_stmt(If(leaf, (), ())).size - leaf_size,
        encode_stmt(SplitPair(k, k, k)).size,
        encode_stmt(JoinPair(k, k, k)).size,
    ]
    expr_frames = [encode_expr(Var(k)).size, leaf_size,
                   encode_expr(ConsE(leaf, leaf)).size - 2 * leaf_size,
                   encode_expr(EqAtom(leaf, leaf)).size - 2 * leaf_size,
                   encode_expr(Hd(leaf)).size - leaf_size, encode_expr(Tl(leaf)).size - leaf_size]
    largest = max(max(f + 1 for f in stmt_frames), max(expr_frames))  # +1: list cell
    return 1 + max_nodes * largest


@dataclass(frozen=True)
class ChiCalibration:
    """Affine bound on the measuring program's time, derived from per-step envelopes.

    On a calibration corpus two envelopes are fitted: interpreter time per
    interpreted step ``u <= p*cost + q`` and setup time ``<= v*code_size + k``.
    For a program class with at most ``run_limit`` consecutive zero-cost
    steps and codes of size at most ``code_limit``, a run of time ``c`` has
    at most ``(run_limit+1)*c + run_limit`` steps, which gives
    ``alpha = p + q*(run_limit+1)`` and ``beta = k + v*code_limit + q*run_limit``.
    """

    p: float
    q: float
    v: float
    k: float
    run_limit: int
    code_limit: int

    @property
    def chi(self) -> ChiFit:
        return ChiFit(self.p + self.q * (self.run_limit + 1),
                      self.k + self.v * self.code_limit + self.q * self.run_limit)


def calibrate_chi(corpus: Iterable[tuple[Tree, Tree]], max_nodes: int, max_var: int,
                  interpreter: Program | None = None) -> ChiCalibration:
    """Fit the per-step envelopes on ``corpus`` for programs of at most ``max_nodes`` nodes.

    Only split and join steps cost nothing, and each is one AST node, so a
    run of zero-cost steps is at most ``max_nodes`` long.
    """
    profiles = [profile_interpreter_run(f, a, interpreter) for f, a in corpus]
    steps = np.array([s for pr in profiles for s in pr.steps], dtype=float).reshape(-1, 2)
    if len(steps) == 0:
        steps = np.zeros((1, 2))
    p, q = _envelope(np.column_stack([steps[:, 0], np.ones(len(steps))]), steps[:, 1])
    setup = np.array([(pr.code_size, pr.setup) for pr in profiles], dtype=float).reshape(-1, 2)
    if len(setup) == 0:
        setup = np.zeros((1, 2))
    v, k = _envelope(np.column_stack([setup[:, 0], np.ones(len(setup))]), setup[:, 1])
    return ChiCalibration(float(p), float(q), float(v), float(k), max_nodes,
                          max_code_size(max_nodes, max_var))


@dataclass
class NormalityEntry:
    index: int
    measure: int | None
    cost: int | None
    output_ok: bool
    excluded: str | None = None


@dataclass
class NormalityReport:
    measure: str
    chi: ChiFit | None
    entries: list[NormalityEntry]
    violations: list[int]
    fitted: ChiFit | None
    slope: float | None

    @property
    def ok(self) -> bool:
        return not self.violations and all(e.output_ok for e in self.entries if e.excluded is None)

    def to_json(self) -> dict:
        return {"measure": self.measure,
                "chi": None if self.chi is None else [self.chi.alpha, self.chi.beta],
                "fitted": None if self.fitted is None else [self.fitted.alpha, self.fitted.beta],
                "regression_slope": self.slope,
                "violations": self.violations,
                "excluded": [e.index for e in self.entries if e.excluded],
                "entries": [{"index": e.index, "measure": e.measure, "cost": e.cost,
                             "output_ok": e.output_ok} for e in self.entries]}


def normality_certify(m: Measure, corpus: Iterable[tuple[Tree, Tree]], chi: ChiFit | None = None,
                      cap=10**6) -> NormalityReport:
    """Run ``C`` on every entry and compare its cost with ``chi`` of the measured grade.

    The cost of ``C`` is its time for the time measure and its space for
    the space measure. The report always carries the tightest affine
    envelope of the corpus and a least-squares slope as a diagnostic.
    """
    prog = measuring_program(m)
    entries = []
    for i, (f_code, a) in enumerate(corpus):
        c = measure(m, f_code, a, cap)
        if c is None:
            entries.append(NormalityEntry(i, None, None, False, "does not halt within cap"))
            continue
        out = run(prog, cons(f_code, a))
        cost = out.time if m.name == "time" else out.space
        entries.append(NormalityEntry(i, c.value, cost, out.value is kappa_lower(c)))
    points = [(e.measure, e.cost) for e in entries if e.excluded is None]
    violations = [] if chi is None else [e.index for e in entries if e.excluded is None
                                         and e.cost > chi.bound(e.measure)]
    slope = None
    if len(points) >= 2 and len({p[0] for p in points}) >= 2:
        slope = float(np.polyfit([p[0] for p in points], [p[1] for p in points], 1)[0])
    return NormalityReport(m.name, chi, entries, violations,
                           fit_chi(points) if points else None, slope)
