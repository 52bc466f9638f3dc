import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import inputs, programs
from moncomp import complexity as cx
from moncomp import grading as gr
from moncomp.machine import codec
from moncomp.machine.interp import run
from moncomp.machine.syntax import parse_program
from moncomp.machine.tree import NIL, TRUE, cons, nat
from moncomp.suites import UNARY_ADD, corpus_pairs, tiny_programs

IDENTITY = parse_program("X0 := X0")
ID_CODE = codec.encode_program(IDENTITY)
LOOP_CODE = codec.encode_program(parse_program("X1 := cons(nil, nil); while X1 { X0 := X0 }"))


def test_trace_predicate_examples():
    t = nat(2)
    x = codec.encode_trace(run(IDENTITY, t).trace)
    assert cx.kleene_T(ID_CODE, t, x)
    assert not cx.kleene_T(ID_CODE, t, NIL)
    assert not cx.kleene_T(ID_CODE, TRUE, x)


def test_enumeration_order():
    first = [t for _, t in zip(range(200), cx.enumerate_trees())]
    assert [t.size for t in first] == sorted(t.size for t in first)
    assert len(set(first)) == len(first)
    # Catalan numbers count the trees of each size
    assert [sum(1 for _ in cx.trees_of_size(n)) for n in range(7)] == [1, 1, 2, 5, 14, 42, 132]


def test_blind_search_examples():
    genuine = codec.encode_trace(run(IDENTITY, NIL).trace)
    assert cx.mu_search_naive(ID_CODE, NIL, 10**6) is genuine
    assert cx.mu_search_naive(ID_CODE, NIL, 0) is None
    assert cx.mu_search_effective(ID_CODE, NIL) is genuine
    assert cx.mu_search_effective(LOOP_CODE, NIL, 2000) is None


def test_tiny_programs_are_found_blind():
    tiny = tiny_programs()
    assert len(tiny) >= 20
    for p, a in tiny[:6]:
        code = codec.encode_program(p)
        x = cx.mu_search_naive(code, a, 10**5)
        assert x is not None and cx.kleene_T(code, a, x)
        assert x is cx.mu_search_effective(code, a)


@given(programs("free"), inputs(), st.integers(0, 200))
def test_normal_form_equals_run(f, a, n):
    got = cx.normal_form_eval(codec.encode_program(f), a, n)
    want = run(f, a, n)
    assert (got is None) == (not want.halted)
    assert got is None or got is want.value


def test_normal_form_identity():
    assert cx.normal_form_eval(ID_CODE, nat(4)) is nat(4)


@given(programs(), inputs())
def test_measures_read_the_run(f, a):
    code = codec.encode_program(f)
    out = run(f, a)
    assert cx.measure(cx.TIME, code, a) == gr.nat(out.time)
    assert cx.measure(cx.SPACE, code, a) == gr.nat(out.space)
    assert cx.measure(cx.SPACE, code, a).value >= a.size


def test_measure_examples():
    assert cx.measure(cx.TIME, ID_CODE, NIL) == gr.nat(2)
    assert cx.measure(cx.TIME, LOOP_CODE, NIL, 100) is None


@given(st.one_of(st.integers(0, 200).map(gr.nat), st.just(gr.INF_NAT)))
def test_section_law(m):
    for meas in cx.MEASURES.values():
        assert meas.kappa_star(meas.kappa_lower(m)) == m


def test_order_predicate():
    assert cx.order_predicate(cx.TIME, gr.nat(3), gr.nat(5))
    assert not cx.order_predicate(cx.TIME, gr.nat(5), gr.nat(3))


def test_blum_examples():
    assert cx.blum_halt_agree(ID_CODE, NIL, 10)
    assert cx.blum_halt_agree(LOOP_CODE, NIL, 10**4)
    assert not cx.blum_decide_leq(cx.TIME, ID_CODE, NIL, 1)
    assert cx.blum_decide_leq(cx.TIME, ID_CODE, NIL, 2)
    for n in (0, 5, 100):
        assert not cx.blum_decide_leq(cx.TIME, LOOP_CODE, NIL, n)
        assert not cx.blum_decide_leq(cx.SPACE, LOOP_CODE, NIL, n)
    with pytest.raises(ValueError):
        cx.blum_decide_leq(cx.TIME, ID_CODE, NIL, gr.INF_NAT)


def test_space_bounded_divergence_is_detected():
    grow = codec.encode_program(parse_program("while cons(nil, nil) { X0 := cons(nil, X0) }"))
    assert not cx.blum_decide_leq(cx.SPACE, grow, NIL, 20)
    spin = codec.encode_program(parse_program("X1 := cons(nil, nil); while X1 { X2 := tl X1; X2 := X1 }"))
    assert not cx.blum_decide_leq(cx.SPACE, spin, NIL, 50)
    assert cx.blum_decide_leq(cx.SPACE, ID_CODE, nat(3), 3)


@settings(max_examples=40)
@given(programs("free"), inputs(), st.integers(0, 40))
def test_space_decision_matches_explicit_search(f, a, n):
    code = codec.encode_program(f)
    assert cx.blum_decide_leq(cx.SPACE, code, a, n) == cx._brute_space(f, a, n)


def test_unary_addition_closed_form():
    # recount from the cost rule: split is free, the loop test costs 2 per visit,
    # each iteration costs 4 + 3, the final move costs 2
    code = codec.encode_program(UNARY_ADD)
    for j in range(8):
        for k in range(8):
            assert cx.measure(cx.TIME, code, cons(nat(j), nat(k))) == gr.nat(2 * (j + 1) + 7 * j + 2)


def test_fit_envelope():
    chi = cx.fit_chi([(0, 5), (10, 25), (20, 30)])
    assert all(chi.bound(c) >= t - 1e-9 for c, t in [(0, 5), (10, 25), (20, 30)])
    assert cx.fit_chi([]) == cx.ChiFit(0.0, 0.0)


def test_empty_normality_report():
    rep = cx.normality_certify(cx.TIME, [], cx.ChiFit(1, 1))
    assert rep.entries == [] and rep.violations == [] and rep.ok


def test_measuring_program_outputs_the_grade():
    rep = cx.normality_certify(cx.TIME, [(ID_CODE, NIL), (codec.encode_program(UNARY_ADD), cons(nat(2), NIL))])
    assert all(e.output_ok for e in rep.entries)
    assert [e.measure for e in rep.entries] == [2, 22]


def test_straight_line_programs_grow_affinely():
    rng = random.Random(3)
    corpus = []
    for _ in range(30):
        n = rng.randint(1, 12)
        text = "; ".join(rng.choice(["X1 := cons(X0, X1)", "X0 := tl X0", "X2 := hd X1", "X0 := X0"])
                         for _ in range(n))
        corpus.append((codec.encode_program(parse_program(text)), nat(3)))
    rep = cx.normality_certify(cx.TIME, corpus)
    c = np.array([e.measure for e in rep.entries], float)
    t = np.array([e.cost for e in rep.entries], float)
    residual = t - np.polyval(np.polyfit(c, t, 1), c)
    assert rep.slope > 0
    assert 1 - residual.var() / t.var() > 0.95


def test_profile_accounts_for_all_time():
    for p, a, out in corpus_pairs(random.Random(1), 5):
        prof = cx.profile_interpreter_run(codec.encode_program(p), a)
        assert [c for c, _ in prof.steps] == run(p, a).trace.step_costs()
        assert prof.total == run(cx.measuring_program(cx.TIME), cons(codec.encode_program(p), a)).time


def test_code_size_bound_covers_generated_programs():
    limit = cx.max_code_size(40, 4)
    for p, _, _ in corpus_pairs(random.Random(2), 50):
        assert codec.encode_program(p).size <= limit
