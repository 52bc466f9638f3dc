from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from conftest import inputs, programs, trees
from moncomp.machine import codec
from moncomp.machine.interp import Config, Halted, Trace, initial_config, run, step
from moncomp.machine.syntax import (
    Assign, ConsE, EqAtom, Hd, If, JoinPair, NilLit, Program, ProgramSyntaxError, SplitPair, Tl,
    Var, While, parse_program, print_program,
)
from moncomp.machine.tree import (
    NIL, TRUE, TreeSyntaxError, cons, format_tree, from_list, nat, nat_value, parse_tree, to_list,
)

GOLDEN = Path(__file__).parent / "golden"
IDENTITY = parse_program("X0 := X0")
LOOP = parse_program("X1 := cons(nil, nil); while X1 { X0 := X0 }")


# -- reference semantics: big-step, written independently of the machine --------

def ref_eval(e, env):
    if isinstance(e, Var):
        return env.get(e.index, NIL)
    if isinstance(e, NilLit):
        return NIL
    if isinstance(e, ConsE):
        return cons(ref_eval(e.left, env), ref_eval(e.right, env))
    if isinstance(e, (Hd, Tl)):
        v = ref_eval(e.arg, env)
        if v is NIL:
            return NIL
        return v.left if isinstance(e, Hd) else v.right
    return TRUE if ref_eval(e.left, env) is ref_eval(e.right, env) else NIL


def ref_nodes(e):
    return 1 + sum(ref_nodes(getattr(e, f)) for f in ("arg", "left", "right") if hasattr(e, f))


def ref_run(p, a):
    env = {0: a}
    acc = {"time": 0, "space": a.size}

    def note():
        acc["space"] = max(acc["space"], sum(v.size for v in env.values()))

    def block(stmts):
        for s in stmts:
            if isinstance(s, Assign):
                acc["time"] += 1 + ref_nodes(s.expr)
                env[s.var] = ref_eval(s.expr, env)
            elif isinstance(s, While):
                while True:
                    acc["time"] += 1 + ref_nodes(s.cond)
                    if ref_eval(s.cond, env) is NIL:
                        break
                    block(s.body)
            elif isinstance(s, If):
                acc["time"] += 1 + ref_nodes(s.cond)
                block(s.then if ref_eval(s.cond, env) is not NIL else s.orelse)
            elif isinstance(s, SplitPair):
                v = env.get(s.src, NIL)
                env[s.left] = NIL if v is NIL else v.left
                env[s.right] = NIL if v is NIL else v.right
            else:
                env[s.dst] = cons(env.get(s.left, NIL), env.get(s.right, NIL))
            note()

    block(p.body)
    return env.get(0, NIL), acc["time"], acc["space"]


# -- trees --------------------------------------------------------------------

def test_tree_basics():
    assert nat(3) is cons(NIL, cons(NIL, cons(NIL, NIL)))
    assert nat_value(nat(7)) == 7
    assert to_list(from_list([NIL, TRUE])) == [NIL, TRUE]
    assert parse_tree("(() . (() . ()))") is nat(2)
    with pytest.raises(TreeSyntaxError):
        parse_tree("(() . ")


@given(trees())
def test_tree_text_round_trip(t):
    assert parse_tree(format_tree(t)) is t


# -- syntax ---------------------------------------------------------------------

def test_parse_examples():
    assert IDENTITY == Program((Assign(0, Var(0)),))
    loop = parse_program("while X0 { X0 := tl X0 }")
    assert loop == Program((While(Var(0), (Assign(0, Tl(Var(0))),)),))
    with pytest.raises(ProgramSyntaxError):
        parse_program("X0 := cons(nil, )")
    p = parse_program("split X0 into (X1, X2); join (X2, X1) into X0; if eq?(X0, nil) { } else { X3 := hd X0 }")
    assert p.body[0] == SplitPair(0, 1, 2) and p.body[1] == JoinPair(2, 1, 0)
    assert p.body[2] == If(EqAtom(Var(0), NilLit()), (), (Assign(3, Hd(Var(0))),))


@given(programs("free"))
def test_print_parse_round_trip(p):
    assert parse_program(print_program(p)) == p


# -- transitions ------------------------------------------------------------------

def test_step_examples():
    terminal = Config((), ())
    assert step(terminal) == (None, 0)
    nxt, cost = step(initial_config(IDENTITY, NIL))
    assert nxt == Config((), ()) and cost == 2
    skip = parse_program("while nil { X0 := X0 }")
    nxt, cost = step(initial_config(skip, NIL))
    assert nxt.control == () and cost == 2


def test_run_examples():
    t = cons(TRUE, nat(2))
    out = run(IDENTITY, t)
    assert isinstance(out, Halted) and out.value is t and out.time == 2 and out.space == t.size
    assert not run(IDENTITY, t, 0).halted
    assert not run(LOOP, NIL, 1000).halted


@given(programs(), inputs())
def test_machine_matches_reference_semantics(p, a):
    out = run(p, a)
    assert (out.value, out.time, out.space) == ref_run(p, a)


@given(programs("free"), inputs(), st.integers(0, 300))
def test_fuel_is_a_restriction(p, a, n):
    bounded, full = run(p, a, n), run(p, a, 5000)
    if bounded.halted:
        assert full.halted and full == bounded
    elif full.halted:
        assert full.time > n


# -- codes ----------------------------------------------------------------------

def test_identity_code_is_frozen():
    assert format_tree(codec.encode_program(IDENTITY)) == (GOLDEN / "identity_program.tree").read_text().strip()
    assert codec.decode_program(codec.encode_program(IDENTITY)) == IDENTITY


def test_decode_rejects_non_codes():
    with pytest.raises(codec.DecodeError):
        codec.decode_program(NIL)
    with pytest.raises(codec.DecodeError):
        codec.decode_program(cons(TRUE, NIL))
    with pytest.raises(codec.DecodeError):
        codec.decode_trace(NIL)


@given(programs("free"))
def test_program_code_round_trip(p):
    assert codec.decode_program(codec.encode_program(p)) == p


@given(trees(12))
def test_decoding_is_strict(t):
    try:
        p = codec.decode_program(t)
    except codec.DecodeError:
        return
    assert codec.encode_program(p) is t


@given(programs(), inputs())
def test_trace_code_round_trip(p, a):
    tr = run(p, a).trace
    assert codec.decode_trace(codec.encode_trace(tr)) == tr
    assert sum(tr.step_costs()) == run(p, a).time


def test_identity_trace_code():
    tr = run(IDENTITY, NIL).trace
    assert tr.configs == (initial_config(IDENTITY, NIL), Config((), ()))
    assert codec.encode_trace(tr).size == 8


def test_trace_rejects_unrelated_configs():
    bogus = Trace((initial_config(IDENTITY, NIL), Config((), (TRUE,))))
    with pytest.raises(ValueError):
        bogus.step_costs()
