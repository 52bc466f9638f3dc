"""Seeded property suites for every module.

Each law is a function ``(rng, cases) -> LawResult`` that draws its own
cases and compares two independent computations of the same quantity.
Suites are lists of laws; :func:`run_suite` runs one by name.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import complexity as cx
from . import diagram as dg
from . import grading as gr
from .corpus import LOOP_GUARD, MAX_NODES, random_input, random_program, random_tree
from .machine.codec import decode_program, encode_program, encode_trace
from .machine.evaluators import (
    Morphism, constant_program, data_service_morphisms, extract_output, gamma, gamma_apply,
    outcome_key, par_compose, program_of, restrict, retract, seq_compose, seq_trace_parts, smn,
    suspend, trace_eval,
)
from .machine.interp import Halted, initial_config, run, step
from .machine.syntax import Assign, If, Program, Var, While, parse_program
from .machine.tree import NIL, Tree, cons, nat
from .machine.universal import counting_universal_program, universal_program


@dataclass
class LawResult:
    name: str
    law: str
    cases: int = 0
    failures: int = 0
    seconds: float = 0.0
    examples: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def check(self, ok: bool, detail: Callable[[], str] | str = "") -> None:
        self.cases += 1
        if not ok:
            self.failures += 1
            if len(self.examples) < 3:
                self.examples.append(detail() if callable(detail) else detail)

    def to_json(self) -> dict:
        return {"name": self.name, "law": self.law, "cases": self.cases, "failures": self.failures,
                "ok": self.ok, "seconds": round(self.seconds, 3), "examples": self.examples}


def _timed(fn):
    def wrapper(rng: random.Random, cases: int) -> LawResult:
        t0 = time.perf_counter()
        res = fn(rng, cases)
        res.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# == grading ==================================================================

def random_grade(rng: random.Random, kind: gr.Monoid, inf_share: float = 0.1) -> gr.Grade:
    if rng.random() < inf_share:
        return gr.infinity(kind)
    if kind is gr.Monoid.NAT:
        return gr.nat(rng.randint(0, 20))
    if kind is gr.Monoid.MULTISET:
        return gr.multiset(rng.choice("abc") for _ in range(rng.randint(0, 4)))
    coeffs = [rng.randint(0, 3) for _ in range(rng.randint(0, 4))]
    return gr.poly_plus(coeffs) if kind is gr.Monoid.POLY_PLUS else gr.poly_O(coeffs)


@_timed
def law_monoid(rng, cases):
    res = LawResult("grading.monoid", "associativity, commutativity, unit and absorbing infinity")
    for _ in range(cases):
        kind = rng.choice(list(gr.Monoid))
        a, b, c = (random_grade(rng, kind) for _ in range(3))
        res.check(gr.oplus(a, gr.oplus(b, c)) == gr.oplus(gr.oplus(a, b), c), f"assoc {a} {b} {c}")
        res.check(gr.oplus(a, b) == gr.oplus(b, a), f"comm {a} {b}")
        res.check(gr.oplus(gr.zero(kind), a) == a, f"unit {a}")
        res.check(gr.oplus(gr.infinity(kind), a).is_inf, f"absorb {a}")
    return res


@_timed
def law_order(rng, cases):
    res = LawResult("grading.order", "induced preorder: reflexive, transitive, witnessed; quotient antisymmetric")
    for _ in range(cases):
        kind = rng.choice(list(gr.Monoid))
        a, b, c = (random_grade(rng, kind) for _ in range(3))
        res.check(gr.leq(a, a), f"refl {a}")
        if gr.leq(a, b) and gr.leq(b, c):
            res.check(gr.leq(a, c), f"trans {a} {b} {c}")
        w = gr.leq_witness(a, b)
        res.check((w is not None) == gr.leq(a, b), f"witness exists {a} {b}")
        if w is not None:
            res.check(gr.oplus(w, a) == b, f"witness {w}+{a}!={b}")
        for kind2, rel in ((gr.Monoid.POLY_PLUS, gr.leq_plus), (gr.Monoid.POLY_O, gr.leq_O)):
            f, g = random_grade(rng, kind2, 0.0), random_grade(rng, kind2, 0.0)
            if rng.random() < 0.3:  # force many equivalent pairs
                g = gr.oplus(f, gr.poly_plus([rng.randint(0, 4)]) if kind2 is gr.Monoid.POLY_PLUS else f)
            if rel(f, g) and rel(g, f):
                res.check(gr.canonicalize(f) == gr.canonicalize(g), f"antisym {f} {g}")
            res.check(rel(f, gr.canonicalize(f)) and rel(gr.canonicalize(f), f), f"canon {f}")
    return res


def _lower_candidates(m: gr.Grade) -> Iterable[gr.Grade]:
    kind = m.monoid
    if kind is gr.Monoid.NAT:
        top = 25 if m.is_inf else m.value
        return [gr.nat(k) for k in range(top + 1)]
    if kind is gr.Monoid.MULTISET:
        items = "abc" if m.is_inf else m.value
        pool = list(items) * (4 if m.is_inf else 1)
        return {gr.multiset(sub) for r in range(len(pool) + 1)
                for sub in itertools.combinations(sorted(pool), r)}
    if kind is gr.Monoid.POLY_PLUS:
        n = 4 if m.is_inf else len(m.value)
        tops = [3] * n if m.is_inf else list(m.value)
        return [gr.poly_plus(cs) for cs in itertools.product(*(range(t + 1) for t in tops))]
    deg = 5 if m.is_inf else len(m.value)
    return [gr.poly_O([0] * d + [1]) for d in range(deg)] + [gr.zero(kind)]


@_timed
def law_meet(rng, cases):
    res = LawResult("grading.meet", "meet is the greatest lower bound of the induced order")
    for _ in range(cases):
        kind = rng.choice(list(gr.Monoid))
        m, n = random_grade(rng, kind), random_grade(rng, kind)
        glb = gr.meet(m, n)
        res.check(gr.leq(glb, m) and gr.leq(glb, n), f"lower {m} {n} {glb}")
        for cand in _lower_candidates(m):
            if gr.leq(cand, m) and gr.leq(cand, n):
                res.check(gr.leq(cand, glb), f"greatest {m} {n}: {cand} !<= {glb}")
    return res


# exhaustive agreement with growth oracles ------------------------------------

def all_polys(max_deg: int = 4, max_coeff: int = 5) -> np.ndarray:
    """Every coefficient vector, lowest degree first, in lexicographic order."""
    return np.array(list(itertools.product(range(max_coeff + 1), repeat=max_deg + 1)))[:, ::-1]


def _values(coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Polynomial values in int64; exact for degree <= 4, coefficients <= 5 and x <= 10^4."""
    powers = xs.astype(np.int64)[:, None] ** np.arange(coeffs.shape[1])[None, :]
    return coeffs.astype(np.int64) @ powers.T


def plus_oracle(max_deg: int = 4, max_coeff: int = 5):
    """Oracle for ``f <=+ g`` by sampling ``d = f - g``.

    ``d`` is judged bounded when its largest value on x in 2000..10^4 does
    not exceed its largest value on x in 0..1000. The answer depends only on
    the difference vector, so it is tabulated once for every difference.
    Returns ``lookup(F_index_codes, G_index_codes) -> bool array``.
    """
    base = 2 * max_coeff + 1
    diffs = np.array(list(itertools.product(range(-max_coeff, max_coeff + 1),
                                            repeat=max_deg + 1)))[:, ::-1]
    early = np.arange(0, 1001)
    late = np.arange(2000, 10001, 1000)
    bounded = np.empty(len(diffs), dtype=bool)
    for lo in range(0, len(diffs), 4096):
        chunk = diffs[lo:lo + 4096]
        e = _values(chunk, early).max(axis=1)
        la = _values(chunk, late).max(axis=1)
        bounded[lo:lo + 4096] = la <= e
    weights = base ** np.arange(max_deg + 1)

    def code(coeffs: np.ndarray) -> np.ndarray:
        return (coeffs * weights).sum(axis=-1)

    offset = int(code(np.full(max_deg + 1, max_coeff)))

    def lookup(f_code, g_code):
        # index of the difference vector f - g in ``diffs`` (digits shifted by max_coeff)
        return bounded[f_code - g_code + offset]

    return code, lookup


def o_oracle_row(f_vals: np.ndarray, g_vals: np.ndarray, c_max: int = 1000) -> np.ndarray:
    """``f <=O g`` for one f against many g: f(x) <= c*g(x) on the samples for some c <= c_max."""
    fv = f_vals[None, :].astype(float)
    gv = g_vals.astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(gv > 0, fv / gv, np.where(fv > 0, np.inf, 0.0))
    return ratio.max(axis=1) <= c_max


O_SAMPLES = np.array([1, 2, 3, 5, 10, 30, 100, 300, 1000, 3000, 10000])


def check_asymptotic(res: LawResult, f_idx: Iterable[int], polys: np.ndarray,
                     max_coeff: int = 5) -> None:
    """Compare ``leq_plus``/``leq_O`` with the oracles for each f in ``f_idx`` against every g."""
    code, plus_lookup = plus_oracle(polys.shape[1] - 1, max_coeff)
    codes = code(polys)
    plus_grades = [gr.poly_plus(p.tolist()) for p in polys]
    o_grades = [gr.poly_O(p.tolist()) for p in polys]
    vals = _values(polys, O_SAMPLES)
    leq_plus, leq_O = gr.leq_plus, gr.leq_O
    for i in f_idx:
        fp, fo = plus_grades[i], o_grades[i]
        got_plus = np.fromiter(map(leq_plus, itertools.repeat(fp), plus_grades), bool, len(polys))
        want_plus = plus_lookup(codes[i], codes)
        got_o = np.fromiter(map(leq_O, itertools.repeat(fo), o_grades), bool, len(polys))
        want_o = o_oracle_row(vals[i], vals)
        bad_plus = np.flatnonzero(got_plus != want_plus)
        bad_o = np.flatnonzero(got_o != want_o)
        res.cases += 2 * len(polys)
        res.failures += len(bad_plus) + len(bad_o)
        for j in bad_plus[:1]:
            res.examples.append(f"<=+ {polys[i].tolist()} {polys[j].tolist()}")
        for j in bad_o[:1]:
            res.examples.append(f"<=O {polys[i].tolist()} {polys[j].tolist()}")


@_timed
def law_asymptotic_sample(rng, cases):
    res = LawResult("grading.asymptotic", "<=+ and <=O agree with sampling oracles (random rows)")
    polys = all_polys()
    check_asymptotic(res, rng.sample(range(len(polys)), max(1, cases // 50)), polys)
    return res


def law_asymptotic_exhaustive(max_deg: int = 4, max_coeff: int = 5) -> LawResult:
    """Every pair of polynomials with degree <= max_deg and coefficients <= max_coeff."""
    t0 = time.perf_counter()
    res = LawResult("grading.asymptotic_exhaustive", "<=+ and <=O agree with sampling oracles on all pairs")
    polys = all_polys(max_deg, max_coeff)
    check_asymptotic(res, range(len(polys)), polys, max_coeff)
    res.seconds = time.perf_counter() - t0
    return res


# == diagram ==================================================================

A = "A"


def random_diagram(rng: random.Random, width: int, n_gens: int, out_width: int | None = None) -> dg.Diagram:
    """Layered random diagram over one wire type built from copy/delete/compare/swap."""
    layers: list[dg.Diagram] = [dg.ids(A, width)]
    w = width
    for _ in range(n_gens):
        choices = ["copy"] + (["delete"] if w >= 1 and w > (1 if out_width else 0) else []) + \
                  (["compare", "swap"] if w >= 2 else [])
        if w == 0:
            break
        g = rng.choice(choices)
        gen = {"copy": dg.Copy(A), "delete": dg.Delete(A), "compare": dg.Compare(A),
               "swap": dg.Swap(A, A)}[g]
        k = len(gen.dom)
        pos = rng.randint(0, w - k)
        layers.append(dg.ids(A, pos) @ gen @ dg.ids(A, w - k - pos))
        w = w - k + len(gen.cod)
    if out_width is not None:
        while w < out_width:
            pos = rng.randint(0, w - 1)
            layers.append(dg.ids(A, pos) @ dg.Copy(A) @ dg.ids(A, w - 1 - pos))
            w += 1
        while w > out_width:
            pos = rng.randint(0, w - 2)
            layers.append(dg.ids(A, pos) @ dg.Compare(A) @ dg.ids(A, w - 2 - pos))
            w -= 1
    return dg.seq_all(layers)


def _equations() -> dict[str, tuple[dg.Diagram, dg.Diagram]]:
    I1 = dg.Id((A,))
    d, e, r, s = dg.Copy(A), dg.Delete(A), dg.Compare(A), dg.Swap(A, A)
    return {
        "coassociativity": (d >> (d @ I1), d >> (I1 @ d)),
        "left counit": (d >> (e @ I1), I1),
        "right counit": (d >> (I1 @ e), I1),
        "cocommutativity": (d >> s, d),
        "compare associativity": ((r @ I1) >> r, (I1 @ r) >> r),
        "compare commutativity": (s >> r, r),
        "distribution left": ((d @ I1) >> (I1 @ r), r >> d),
        "distribution right": ((I1 @ d) >> (r @ I1), r >> d),
        "copy then compare": (d >> r, I1),
    }


EQUATIONS = _equations()


@_timed
def law_diagram_equations(rng, cases):
    """Each equation in random contexts, compared relationally at carriers 1..4 and by normal form."""
    res = LawResult("diagram.equations", "comonoid, semigroup and data distribution equations in context")
    for i in range(cases):
        name, (lhs, rhs) = list(EQUATIONS.items())[i % len(EQUATIONS)]
        left_pad, right_pad = rng.randint(0, 1), rng.randint(0, 1)
        width = left_pad + len(lhs.dom) + right_pad
        pre = random_diagram(rng, rng.randint(1, 3), rng.randint(0, 3), width)
        post = random_diagram(rng, left_pad + len(lhs.cod) + right_pad, rng.randint(0, 3))
        wrap = lambda core: pre >> (dg.ids(A, left_pad) @ core @ dg.ids(A, right_pad)) >> post
        dl, dr = wrap(lhs), wrap(rhs)
        res.check(dg.spider_normalize(dl) == dg.spider_normalize(dr), f"{name}: normal forms differ")
        for k in (1, 2, 3, 4):
            res.check(dg.finrel_eval(dl, k) == dg.finrel_eval(dr, k), f"{name}: relations differ at {k}")
    return res


def diagram_corpus(rng: random.Random, count: int) -> list[dg.Diagram]:
    return [random_diagram(rng, rng.randint(0, 3), rng.randint(0, 12)) for _ in range(count)]


@_timed
def law_spider_soundness(rng, cases):
    res = LawResult("diagram.spider_soundness", "rebuilding the spider normal form preserves the relation")
    for d in diagram_corpus(rng, cases):
        nf = dg.spider_normalize(d)
        rebuilt = dg.spider_rebuild(nf)
        res.check(dg.finrel_eval(d, 2) == dg.finrel_eval(rebuilt, 2), lambda: f"{dg.diagram_to_json(d)}")
        res.check(dg.spider_normalize(rebuilt) == nf, "rebuild is not a fixed point")
    return res


@_timed
def law_spider_completeness(rng, cases):
    res = LawResult("diagram.spider_completeness", "equal normal forms iff equal relations at carrier 2")
    corpus = diagram_corpus(rng, cases)
    groups: dict[tuple[int, int], list] = {}
    for d in corpus:
        groups.setdefault((len(d.dom), len(d.cod)), []).append(
            (dg.spider_normalize(d), dg.finrel_eval(d, 2)))
    for items in groups.values():
        for (n1, r1), (n2, r2) in itertools.combinations(items, 2):
            res.check((n1 == n2) == (r1 == r2), "normal form and relation disagree")
    return res


@_timed
def law_functions(rng, cases):
    res = LawResult("diagram.functions", "single-valued and total iff a comonoid homomorphism")
    for _ in range(cases):
        k = rng.randint(1, 3)
        cells = [((x,), (y,)) for x in range(k) for y in range(k)]
        rel = dg.FinRel(k, 1, 1, frozenset(c for c in cells if rng.random() < 0.4))
        if rng.random() < 0.3:  # plenty of genuine functions
            rel = dg.FinRel.of(k, 1, 1, [((x,), (rng.randrange(k),)) for x in range(k)])
        f = dg.Gen("f", (A,), (A,))
        env = {"f": rel}
        copy_law = dg.finrel_eval(f >> dg.Copy(A), k, env) == dg.finrel_eval(dg.Copy(A) >> (f @ f), k, env)
        delete_law = dg.finrel_eval(f >> dg.Delete(A), k, env) == dg.finrel_eval(dg.Delete(A), k, env)
        res.check(dg.is_function(rel) == (copy_law and delete_law), f"{rel}")
    return res


# == machine ==================================================================

def _program(rng: random.Random) -> Program:
    return random_program(rng, rng.choice(["halting", "halting", "free", "divergent"]))


def _fuel_around(rng: random.Random, t: int | None) -> int | float:
    if t is None:
        return rng.choice([0, 5, 50, 500])
    return rng.choice([max(0, t - 1 - rng.randint(0, 3)), t, t + rng.randint(1, 10), float("inf"),
                       rng.randint(0, 2 * t + 2)])


PROBE_FUEL = 20_000


@_timed
def law_determinism(rng, cases):
    res = LawResult("machine.determinism", "equal inputs give identical outcomes")
    for _ in range(cases):
        p, a = _program(rng), random_input(rng)
        o1, o2 = run(p, a, 2000), run(p, a, 2000)
        res.check(o1 == o2, f"{p}")
    return res


@_timed
def law_fuel_monotone(rng, cases):
    res = LawResult("machine.fuel_monotonicity", "bounded evaluation is the restriction of unbounded evaluation")
    for _ in range(cases):
        p, a = _program(rng), random_input(rng)
        full = run(p, a, PROBE_FUEL)
        t = full.time if full.halted else None
        n = _fuel_around(rng, t)
        o = run(p, a, n)
        if full.halted:
            expect_halt = n >= full.time
            res.check(o.halted == expect_halt, lambda: f"halting at {n}, time {full.time}: {p}")
            if o.halted:
                res.check(o == full, f"outcome changed with fuel: {p}")
                bigger = run(p, a, n + rng.randint(0, 50))
                res.check(bigger == o, f"outcome changed with more fuel: {p}")
        elif n <= PROBE_FUEL:
            res.check(not o.halted, f"halted below a failed probe: {p}")
    return res


def documented_cost(stmt) -> int:
    """The cost rule restated from the syntax: one per statement and per expression node; split/join free."""
    def nodes(e) -> int:
        return 1 + sum(nodes(getattr(e, f)) for f in ("arg", "left", "right") if hasattr(e, f))

    if isinstance(stmt, Assign):
        return 1 + nodes(stmt.expr)
    if isinstance(stmt, (While, If)):
        return 1 + nodes(stmt.cond)
    return 0


def replay_ok(p: Program, a: Tree, o: Halted) -> bool:
    tr = o.trace
    if tr.first != initial_config(p, a) or not tr.complete:
        return False
    for c, d in zip(tr.configs, tr.configs[1:]):
        if step(c)[0] != d:
            return False
    last = tr.last.store
    recount = sum(documented_cost(c.control[0]) for c in tr.configs[:-1])
    return (sum(tr.step_costs()) == o.time == recount and tr.space == o.space
            and (last[0] if last else NIL) is o.value)


@_timed
def law_trace_replay(rng, cases):
    res = LawResult("machine.trace_replay", "replaying a trace reproduces value, time and space")
    for _ in range(cases):
        p, a = _program(rng), random_input(rng)
        o = run(p, a, PROBE_FUEL)
        if o.halted:
            res.check(replay_ok(p, a, o), f"{p}")
        else:
            res.check(not o.partial.complete and o.partial.time <= PROBE_FUEL, f"partial {p}")
    return res


@_timed
def law_smn(rng, cases):
    res = LawResult("machine.smn", "specialised program on b = program on (a . b), time included")
    for _ in range(cases):
        f, a, b = _program(rng), random_input(rng), random_input(rng)
        full = run(f, cons(a, b), PROBE_FUEL)
        n = _fuel_around(rng, full.time if full.halted else None)
        lhs = run(decode_program(smn(encode_program(f), a)), b, n)
        rhs = run(f, cons(a, b), n)
        res.check(outcome_key(lhs) == outcome_key(rhs), lambda: f"fuel {n}: {f}")
    return res


@_timed
def law_composition(rng, cases):
    res = LawResult("machine.composition", "sequential and parallel composites add time exactly")
    for _ in range(cases):
        p, q = random_program(rng), random_program(rng)
        a, b = random_input(rng), random_input(rng)
        rp = run(p, a)
        rq = run(q, rp.value)
        comp = run(seq_compose(p, q), a)
        res.check(comp.value is rq.value and comp.time == rp.time + rq.time, f"seq {p} ; {q}")
        parts = seq_trace_parts(p, q, a)
        joined = parts[0].then(parts[1]).then(parts[2].with_suffix(()))
        res.check(encode_trace(comp.trace) is encode_trace(joined), f"trace concat {p} ; {q}")
        rb = run(q, b)
        tens = run(par_compose(p, q), cons(a, b))
        res.check(tens.value is cons(rp.value, rb.value) and tens.time == rp.time + rb.time,
                  f"par {p} | {q}")
    return res


@_timed
def law_restriction(rng, cases):
    res = LawResult("machine.restriction", "restriction square and (f_m)|n = f_(m meet n)")
    for _ in range(cases):
        f = Morphism(random_program(rng), random_grade(rng, gr.Monoid.NAT, 0.2))
        g = Morphism(random_program(rng), random_grade(rng, gr.Monoid.NAT, 0.2))
        m, n = random_grade(rng, gr.Monoid.NAT, 0.2), random_grade(rng, gr.Monoid.NAT, 0.2)
        from .machine.evaluators import compose
        lhs = restrict(compose(f, g), gr.oplus(f.budget, m))
        rhs = compose(f, restrict(g, m))
        res.check(lhs == rhs, f"square {f.budget} {g.budget} {m}")
        res.check(restrict(restrict(f, m), n) == restrict(f, gr.meet(m, n)), "restrict twice")
        res.check(restrict(f, gr.INF_NAT) == f, "restrict at infinity")
        a = random_input(rng)
        r = restrict(f, n)
        res.check(outcome_key(r(a)) == outcome_key(run(f.program, a, gr.meet(f.budget, n))), "extensional")
    return res


LOOP = parse_program("X1 := cons(nil, nil); while X1 { X0 := X0 }")


@_timed
def law_non_covering(rng, cases):
    res = LawResult("machine.non_covering", "a looping program lies in no finite grade")
    for _ in range(max(1, cases // 10)):
        n = rng.randint(0, 5000)
        res.check(not run(LOOP, random_input(rng), n).halted, f"looping program halted at {n}")
    return res


@_timed
def law_retractions(rng, cases):
    res = LawResult("machine.retraction", "decode after encode is the identity on each subtype")
    for _ in range(cases):
        samples = {
            "bool": rng.random() < 0.5,
            "nat": rng.randint(0, 40),
            "pair": (random_tree(rng), random_tree(rng)),
            "program": random_program(rng, "free"),
        }
        p, a = random_program(rng), random_input(rng)
        samples["trace"] = run(p, a).trace
        for tag, v in samples.items():
            r = retract(tag)
            res.check(r.decode(r.encode(v)) == (v, True), f"{tag} {v}")
            t = random_tree(rng, 8)
            res.check(r.project(r.project(t)) is r.project(t), f"{tag} projection not idempotent")
    return res


@_timed
def law_data_services(rng, cases):
    res = LawResult("machine.data_services", "copy and delete are free; compare returns equal halves")
    copy, delete, compare = (data_service_morphisms(k) for k in ("copy", "delete", "compare"))
    for _ in range(cases):
        t, u = random_tree(rng), random_tree(rng)
        c = run(copy.program, t, 0)
        res.check(c.halted and c.value is cons(t, t) and c.time == 0, "copy")
        d = run(delete.program, t, 0)
        res.check(d.halted and d.value is NIL and d.time == 0, "delete")
        e = run(compare.program, cons(t, t))
        res.check(e.halted and e.value is t, "compare equal")
        if u is not t:
            res.check(not run(compare.program, cons(t, u), 300).halted, "compare unequal halted")
    return res


def corpus_pairs(rng: random.Random, count: int, fuel: int = PROBE_FUEL) -> list[tuple[Program, Tree, Halted]]:
    """Halting (program, input, outcome) triples."""
    out = []
    while len(out) < count:
        p, a = random_program(rng), random_input(rng)
        o = run(p, a, fuel)
        if o.halted:
            out.append((p, a, o))
    return out


@_timed
def law_self_interpreter(rng, cases):
    res = LawResult("machine.self_interpreter", "U agrees with the machine; the counting variant reports its time")
    U, C = universal_program(), counting_universal_program()
    for i, (p, a, o) in enumerate(corpus_pairs(rng, cases)):
        code = encode_program(p)
        res.check(run(U, cons(code, a)).value is o.value, f"U value {p}")
        if i % 4 == 0:
            res.check(run(C, cons(code, a)).value is cons(o.value, nat(o.time)), f"count {p}")
    bad = random_tree(rng, 10)
    try:
        decode_program(bad)
    except ValueError:
        res.check(run(U, cons(bad, NIL)).value is NIL, "ill-formed code")
    return res


def _chooser(c1: Tree, c2: Tree) -> Program:
    """Returns code ``c1`` on a non-nil input and ``c2`` on nil."""
    return Program((If(Var(0), constant_program(c1).body, constant_program(c2).body),))


@_timed
def law_gamma(rng, cases):
    res = LawResult("machine.gamma", "program evaluation is surjective and natural in the parameter")
    for i in range(cases):
        m = Morphism(random_program(rng))
        a, x, y = random_input(rng), random_input(rng), random_input(rng)
        direct = run(m.program, a)
        h_code = encode_program(constant_program(program_of(m)))
        meta = gamma_apply(h_code, x, a)
        res.check(meta.value is direct.value and meta.time == direct.time, "surjectivity (meta)")
        if i % 5 == 0:
            res.check(gamma(h_code)(cons(x, a)).value is direct.value, "surjectivity (object)")
        g = random_program(rng)
        h = _chooser(encode_program(random_program(rng)), encode_program(random_program(rng)))
        gy = run(g, y)
        lhs = gamma_apply(encode_program(seq_compose(g, h)), y, a)
        rhs = gamma_apply(encode_program(h), gy.value, a)
        res.check(lhs.value is rhs.value and lhs.time == gy.time + rhs.time, "naturality square")
    return res


# == complexity ===============================================================

def nf_triples(rng: random.Random, count: int):
    for _ in range(count):
        f, a = _program(rng), random_input(rng)
        full = run(f, a, PROBE_FUEL)
        yield f, a, _fuel_around(rng, full.time if full.halted else None)


@_timed
def law_normal_form(rng, cases):
    res = LawResult("complexity.normal_form", "suspend ; trace_eval_n ; extract equals u_n as partial functions")
    for f, a, n in nf_triples(rng, cases):
        code = encode_program(f)
        got = cx.normal_form_eval(code, a, n)
        want = run(f, a, n)
        res.check((got is None) == (not want.halted) and (got is None or got is want.value),
                  lambda: f"fuel {n}: {f}")
    return res


@_timed
def law_kleene(rng, cases):
    res = LawResult("complexity.kleene", "output of the searched trace equals the direct value")
    for f, a, o in corpus_pairs(rng, cases):
        code = encode_program(f)
        x = cx.mu_search_effective(code, a, PROBE_FUEL)
        res.check(x is not None and extract_output(x) is o.value, f"{f}")
        res.check(x is not None and cx.kleene_T(code, a, x), "predicate rejects")
        other = random_input(rng)
        if other is not a and x is not None:
            res.check(not cx.kleene_T(code, other, x), "trace accepted for a different input")
    res.check(cx.mu_search_effective(encode_program(LOOP), NIL, 3000) is None, "loop found")
    return res


def tiny_programs() -> list[tuple[Program, Tree]]:
    """One-step runs whose trace codes have at most 13 nodes.

    Every tree with at most 12 nodes, and most with 13, comes before the
    millionth candidate of the blind search, so each of these is reachable.
    """
    texts = ["", "X0 := X0", "X0 := X1", "X0 := nil", "X1 := X0", "X0 := X2", "X1 := X1",
             "X1 := nil", "X2 := X0", "X1 := X2", "X2 := X1", "X2 := nil",
             "split X0 into (X0, X0)", "X0 := hd X0", "X2 := X2", "split X0 into (X0, X1)",
             "split X0 into (X1, X0)", "split X1 into (X0, X0)", "X0 := tl X0", "X1 := hd X0",
             "X2 := X3", "X3 := X2"]
    return [(parse_program(text), NIL) for text in texts]


def law_mu_naive(cap: int = 10**6) -> LawResult:
    t0 = time.perf_counter()
    res = LawResult("complexity.mu_naive", "blind search finds the same trace as running the machine")
    for p, a in tiny_programs():
        code = encode_program(p)
        res.check(cx.mu_search_naive(code, a, cap) is cx.mu_search_effective(code, a), f"{p} on {a}")
    res.seconds = time.perf_counter() - t0
    return res


@_timed
def law_internal_grading(rng, cases):
    res = LawResult("complexity.internal_grading", "trace_eval at n is trace_eval at infinity restricted to n")
    for f, a, n in nf_triples(rng, cases):
        susp = suspend(encode_program(f), a)
        full = trace_eval(susp, PROBE_FUEL)
        got = trace_eval(susp, n)
        if full is None:
            if n <= PROBE_FUEL:
                res.check(got is None, "defined below a failed probe")
            continue
        t = cx.TIME.kappa_star(full).value
        res.check(got is (full if n >= t else None), f"fuel {n}, time {t}")
    return res


@_timed
def law_section(rng, cases):
    res = LawResult("complexity.section", "kappa_star after kappa_lower is the identity")
    for _ in range(cases):
        m = random_grade(rng, gr.Monoid.NAT, 0.1)
        for meas in (cx.TIME, cx.SPACE):
            res.check(meas.kappa_star(meas.kappa_lower(m)) == m, f"{m}")
    for _ in range(max(1, cases // 10)):
        p, a = random_program(rng), random_input(rng)
        o = run(p, a)
        x = encode_trace(o.trace)
        res.check(cx.TIME.kappa_star(x) == gr.nat(o.time) and cx.SPACE.kappa_star(x) == gr.nat(o.space),
                  "trace grade")
    return res


@_timed
def law_order_predicate(rng, cases):
    res = LawResult("complexity.order", "measure order agrees with the grading order")
    for _ in range(cases):
        g1, g2 = random_grade(rng, gr.Monoid.NAT), random_grade(rng, gr.Monoid.NAT)
        res.check(cx.order_predicate(cx.TIME, g1, g2) == gr.leq(g1, g2), f"{g1} {g2}")
        res.check(cx.order_predicate(cx.SPACE, g1, g1), "reflexive")
    return res


def blum_cases(rng: random.Random, count: int, divergent: int):
    for i in range(count):
        family = "divergent" if i < divergent else rng.choice(["halting", "halting", "free"])
        yield random_program(rng, family), random_input(rng)


@_timed
def law_blum(rng, cases):
    res = LawResult("complexity.blum", "halting agreement and decidable bounds match a brute-force run")
    cap = 3000
    for p, a in blum_cases(rng, cases, max(1, cases // 8)):
        code = encode_program(p)
        o = run(p, a, cap)
        res.check(cx.blum_halt_agree(code, a, cap), f"halt agreement {p}")
        meas = rng.choice([cx.TIME, cx.SPACE])
        if o.halted:
            value = o.time if meas is cx.TIME else o.space
            bounds = [max(0, value - 1), value, value + 1, rng.randint(0, 2 * value + 2)]
        else:
            bounds = [rng.randint(0, 60) for _ in range(3)]
        report = cx.blum_report(meas, code, a, cap, bounds)
        res.check(report.ok, lambda: f"{meas.name} {report.to_json()}")
    return res


@_timed
def law_gamma_normal_form(rng, cases):
    res = LawResult("complexity.gamma_normal_form", "for gamma-built morphisms the staged normal form equals direct evaluation")
    for _ in range(cases):
        h = _chooser(encode_program(random_program(rng, "free")), encode_program(random_program(rng)))
        x, a = random_input(rng), random_input(rng)
        direct = gamma_apply(encode_program(h), x, a, PROBE_FUEL)
        n = _fuel_around(rng, direct.time if direct.halted else None)
        staged = run(h, x, n)
        if staged.halted:
            out = cx.normal_form_eval(staged.value, a, n - staged.time)
        else:
            out = None
        want = gamma_apply(encode_program(h), x, a, n)
        res.check((out is None) == (not want.halted) and (out is None or out is want.value), "staged != direct")
    return res


UNARY_ADD = parse_program("split X0 into (X1, X2); while X1 { X2 := cons(nil, X2); X1 := tl X1 }; X0 := X2")


@_timed
def law_known_values(rng, cases):
    res = LawResult("complexity.known_values", "time of unary addition is 9j+4")
    code = encode_program(UNARY_ADD)
    for j in range(21):
        for k in range(21):
            g = cx.measure(cx.TIME, code, cons(nat(j), nat(k)))
            res.check(g == gr.nat(9 * j + 4), f"j={j} k={k}: {g}")
    return res


def normality_split(rng: random.Random, size: int = 100):
    """Calibrate the affine bound on one corpus half and certify the other half against it."""
    pairs = corpus_pairs(rng, 2 * size)
    corpus = [(encode_program(p), a) for p, a, _ in pairs]
    calibration = cx.calibrate_chi(corpus[:size], MAX_NODES, LOOP_GUARD)
    return calibration, cx.normality_certify(cx.TIME, corpus[size:], calibration.chi)


@_timed
def law_normality(rng, cases):
    res = LawResult("complexity.normality", "time of the measuring program is affinely bounded by the measure")
    calibration, valid = normality_split(rng, max(4, cases // 2))
    res.check(not valid.violations, lambda: f"violations {valid.violations}, chi {calibration.chi}")
    for e in valid.entries:
        res.check(e.output_ok, f"measuring program output wrong at entry {e.index}")
    return res


SUITES: dict[str, list[Callable[[random.Random, int], LawResult]]] = {
    "grading": [law_monoid, law_order, law_meet, law_asymptotic_sample],
    "diagram": [law_diagram_equations, law_spider_soundness, law_spider_completeness, law_functions],
    "machine": [law_determinism, law_fuel_monotone, law_trace_replay, law_smn, law_composition,
                law_restriction, law_non_covering, law_retractions, law_data_services,
                law_self_interpreter, law_gamma],
    "complexity": [law_normal_form, law_kleene, law_internal_grading, law_section,
                   law_order_predicate, law_blum, law_gamma_normal_form, law_known_values,
                   law_normality],
}

# laws whose cases are expensive run on a fraction of the requested count
_SCALE = {"machine.self_interpreter": 0.1, "machine.gamma": 0.2, "complexity.normality": 0.2,
          "complexity.gamma_normal_form": 0.5}


def run_suite(name: str, seed: int = 0, cases: int = 200) -> list[LawResult]:
    if name == "all":
        return [r for n in SUITES for r in run_suite(n, seed, cases)]
    if name not in SUITES:
        raise KeyError(name)
    out = []
    for i, law in enumerate(SUITES[name]):
        rng = random.Random(f"{seed}:{name}:{i}")
        label = f"{name}.{law.__name__.removeprefix('law_')}"
        scale = next((v for k, v in _SCALE.items() if label.startswith(k)), 1.0)
        out.append(law(rng, max(1, int(cases * scale))))
    return out
