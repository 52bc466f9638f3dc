import pytest
from hypothesis import given, settings

from conftest import inputs, programs, trees
from moncomp.machine import codec
from moncomp.machine.interp import run
from moncomp.machine.syntax import parse_program
from moncomp.machine.tree import NIL, TRUE, cons, nat
from moncomp.machine.universal import (
    counting_universal_program, render_source, space_universal_program, universal_program,
)

IDENTITY = codec.encode_program(parse_program("X0 := X0"))


def test_identity_through_interpreter():
    t = cons(TRUE, nat(3))
    assert run(universal_program(), cons(IDENTITY, t)).value is t
    assert run(counting_universal_program(), cons(IDENTITY, NIL)).value is cons(NIL, nat(2))


def test_unary_addition_time_is_reported():
    add = parse_program("split X0 into (X1, X2); while X1 { X2 := cons(nil, X2); X1 := tl X1 }; X0 := X2")
    out = run(counting_universal_program(), cons(codec.encode_program(add), cons(nat(3), nat(1))))
    assert out.value is cons(nat(4), nat(31))


def test_variants_are_distinct_programs():
    assert render_source("plain") != render_source("time") != render_source("space")
    with pytest.raises(ValueError):
        render_source("energy")


@settings(max_examples=25)
@given(programs(), inputs())
def test_interpreter_variants_agree_with_machine(p, a):
    code = codec.encode_program(p)
    direct = run(p, a)
    assert run(universal_program(), cons(code, a)).value is direct.value
    assert run(counting_universal_program(), cons(code, a)).value is cons(direct.value, nat(direct.time))
    assert run(space_universal_program(), cons(code, a)).value is cons(direct.value, nat(direct.space))


@settings(max_examples=40)
@given(trees(10))
def test_ill_formed_codes_give_nil(t):
    try:
        codec.decode_program(t)
    except codec.DecodeError:
        assert run(universal_program(), cons(t, TRUE)).value is NIL
