import pytest
from hypothesis import given, strategies as st

from conftest import inputs, programs, trees
from moncomp import grading as gr
from moncomp.machine import codec
from moncomp.machine.evaluators import (
    ExtractionError, Morphism, compose, constant_program, data_service_morphisms, extract_output,
    gamma, gamma_apply, outcome_key, par_compose, program_of, restrict, retract, seq_compose,
    seq_trace_parts, smn, specialize, suspend, tensor, trace_eval,
)
from moncomp.machine.interp import CostModel, cost_model, initial_config, run
from moncomp.machine.syntax import parse_program
from moncomp.machine.tree import NIL, TRUE, cons, nat

IDENTITY = parse_program("X0 := X0")
FST = parse_program("X0 := hd X0")
LOOP = parse_program("X1 := cons(nil, nil); while X1 { X0 := X0 }")


@given(trees(), trees())
def test_first_projection_specialised(a, b):
    out = run(codec.decode_program(smn(codec.encode_program(FST), a)), b)
    assert out.value is a


def test_smn_rejects_non_code():
    with pytest.raises(codec.DecodeError):
        smn(NIL, TRUE)


@given(programs("free"), inputs(), inputs(), st.integers(0, 200))
def test_smn_preserves_outcome_and_time(f, a, b, n):
    lhs = run(specialize(f, a), b, n)
    rhs = run(f, cons(a, b), n)
    assert outcome_key(lhs) == outcome_key(rhs)


def test_smn_needs_free_quoting():
    f, a, b = parse_program("X0 := tl X0"), nat(3), NIL
    with cost_model(CostModel(admin=1)):
        assert run(specialize(f, a), b).time != run(f, cons(a, b)).time


@given(trees())
def test_constant_program_is_free(t):
    out = run(constant_program(t), TRUE, 0)
    assert out.halted and out.value is t and out.time == 0


def test_suspend_and_trace_eval():
    t = nat(2)
    susp = suspend(codec.encode_program(IDENTITY), t)
    assert codec.decode_config(susp) == initial_config(IDENTITY, t)
    x = trace_eval(susp)
    assert len(codec.decode_trace(x).configs) == 2
    assert extract_output(x) is t
    assert trace_eval(susp, gr.nat(0)) is None
    with pytest.raises(codec.DecodeError):
        suspend(cons(TRUE, NIL), t)


def test_extract_rejects_incomplete_traces():
    partial = run(LOOP, NIL, 5).partial
    with pytest.raises(ExtractionError):
        extract_output(codec.encode_trace(partial))
    with pytest.raises(ExtractionError):
        extract_output(TRUE)


@given(programs(), inputs())
def test_trace_eval_final_store(f, a):
    x = trace_eval(suspend(codec.encode_program(f), a))
    assert extract_output(x) is run(f, a).value


def test_identity_composite_time():
    assert run(seq_compose(IDENTITY, IDENTITY), TRUE).time == 2 * run(IDENTITY, TRUE).time


@given(programs(), programs(), inputs(), inputs())
def test_composites_add_time(p, q, a, b):
    rp = run(p, a)
    rq = run(q, rp.value)
    comp = run(seq_compose(p, q), a)
    assert comp.value is rq.value and comp.time == rp.time + rq.time
    first, glue, last = seq_trace_parts(p, q, a)
    assert glue.time == 0
    joined = first.then(glue).then(last.with_suffix(()))
    assert codec.encode_trace(joined) is codec.encode_trace(comp.trace)
    par = run(par_compose(p, q), cons(a, b))
    rb = run(q, b)
    assert par.value is cons(rp.value, rb.value) and par.time == rp.time + rb.time


def test_restriction_laws():
    f = Morphism(parse_program("X0 := tl X0; X0 := tl X0"), gr.nat(10))
    assert restrict(restrict(f, gr.nat(7)), gr.nat(3)) == restrict(f, gr.nat(3))
    assert restrict(f, gr.INF_NAT) == f
    assert not restrict(f, gr.nat(5))(nat(4)).halted
    assert restrict(f, gr.nat(6))(nat(4)).value is nat(2)
    assert compose(f, f).budget == gr.nat(20) and tensor(f, f).budget == gr.nat(20)
    with pytest.raises(gr.GradingError):
        Morphism(IDENTITY, gr.poly_plus([1]))


@given(trees())
def test_data_services(t):
    copy, delete, compare = (data_service_morphisms(k) for k in ("copy", "delete", "compare"))
    assert copy.budget == gr.ZERO_NAT == delete.budget
    c = run(copy.program, t, 0)
    assert c.halted and c.value is cons(t, t) and c.time == 0
    d = run(delete.program, t, 0)
    assert d.halted and d.value is NIL
    assert run(compare.program, cons(t, t)).value is t


def test_compare_diverges_on_unequal_halves():
    compare = data_service_morphisms("compare")
    assert not run(compare.program, cons(NIL, cons(NIL, NIL)), 10**4).halted


def test_retraction_examples():
    assert retract("bool").decode(retract("bool").encode(True)) == (True, True)
    assert retract("nat").encode(3) is cons(NIL, cons(NIL, cons(NIL, NIL)))
    assert retract("bool").decode(nat(2)) == (False, False)
    with pytest.raises(ValueError):
        retract("float")


@given(programs("free"), st.integers(0, 30), trees())
def test_retractions_identity_in_image(p, k, t):
    assert retract("program").decode(codec.encode_program(p)) == (p, True)
    assert retract("nat").decode(nat(k)) == (k, True)
    for tag in ("bool", "nat", "pair", "program", "trace"):
        r = retract(tag)
        assert r.project(r.project(t)) is r.project(t)


@given(programs(), inputs(), inputs())
def test_gamma_on_constant_programs(f, x, a):
    h_code = codec.encode_program(constant_program(codec.encode_program(f)))
    out = gamma_apply(h_code, x, a)
    direct = run(f, a)
    # the constant stage is free, so only the dispatched run is charged
    assert out.value is direct.value and out.time == direct.time


def test_gamma_object_level_matches_meta_level():
    f = parse_program("X0 := cons(X0, X0)")
    h_code = codec.encode_program(constant_program(codec.encode_program(f)))
    assert gamma(h_code)(cons(TRUE, nat(2))).value is cons(nat(2), nat(2))
    m = Morphism(f)
    assert program_of(m) is codec.encode_program(f)


def test_program_of_refeeds_to_gamma():
    m = gamma(codec.encode_program(constant_program(codec.encode_program(FST))))
    refed = codec.encode_program(constant_program(program_of(m)))
    for x, a in [(NIL, TRUE), (TRUE, cons(nat(1), NIL))]:
        assert gamma_apply(refed, NIL, cons(x, a)).value is m(cons(x, a)).value


def test_gamma_rejects_non_code_at_dispatch():
    h_code = codec.encode_program(constant_program(cons(TRUE, NIL)))
    with pytest.raises(codec.DecodeError):
        gamma_apply(h_code, NIL, NIL)
    assert gamma(h_code)(cons(NIL, NIL)).value is NIL
