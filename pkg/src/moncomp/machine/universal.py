"""A self-interpreter for the machine, written in its own language.

``U`` takes ``(code . a)``. It first checks that ``code`` decodes (the same
strict rules as :func:`~moncomp.machine.codec.decode_program`) and returns
nil otherwise. Valid programs are run with an explicit control stack, a
value stack for expression evaluation and the interpreted store kept as a
list indexed by variable number.

Two instrumented variants return ``(result . n)`` with ``n`` a unary
numeral: the counting interpreter charges exactly as the cost model does,
so ``n`` is the time of the interpreted run; the space-tracking one
records the largest interpreted store.

The source is a template: ``$NAME`` is a working variable, ``%NAME`` a
numeric tag literal, ``&LOOKUP(dst, k)`` / ``&STORE(k)`` expand to store
access, and ``<<time: ...>>`` / ``<<space: ...>>`` enclose text that belongs
only to the matching variant.
"""

from __future__ import annotations

import functools
import re

from .syntax import Program, parse_program

# control-stack item kinds, most frequent first
_ITEM_KINDS = ["EXPR", "STMT", "BLOCK", "DOASSIGN", "DOCONS", "DOHD", "DOTL", "DOEQ",
               "DOWHILE", "DOIF"]
_CHECK_KINDS = ["VL", "VS", "VE", "VN"]
_TAGS = {name: k for k, name in enumerate(_ITEM_KINDS)}
_TAGS.update({name: k for k, name in enumerate(_CHECK_KINDS)})
_TAGS.update({str(k): k for k in range(8)})

_VARS = ["P", "A", "OK", "W", "ITEM", "KD", "D", "T", "R", "K", "TT", "PRE", "CS", "VS", "ST",
         "V", "L", "PAY", "CNT", "MX", "S1", "S2", "TS"]


def _literal(k: int) -> str:
    out = "nil"
    for _ in range(k):
        out = f"cons(nil, {out})"
    return out


def _chain(var: str, branches: list[str], default: str = "") -> str:
    """Dispatch on a unary numeral held in ``var`` (which is consumed)."""
    text = default
    for body in reversed(branches[1:]):
        text = f"{var} := tl {var}; if {var} {{ {text} }} else {{ {body} }}"
    return f"if {var} {{ {text} }} else {{ {branches[0]} }}"


def _exact(var: str, branches: list[str], default: str) -> str:
    """Dispatch on ``var`` being exactly one of the numerals 0..len-1."""
    text = default
    for k in reversed(range(len(branches))):
        text = f"if eq?({var}, %{k}) {{ {branches[k]} }} else {{ {text} }}"
    return text


_LOOKUP = """$TT := $ST; $K := {k};
while $K {{ $TT := tl $TT; $K := tl $K }};
{dst} := hd $TT"""

_STORE = """$PRE := nil; $TT := $ST; $K := {k};
while $K {{ $PRE := cons(hd $TT, $PRE); $TT := tl $TT; $K := tl $K }};
$TT := cons($V, tl $TT);
while $PRE {{ $TT := cons(hd $PRE, $TT); $PRE := tl $PRE }};
$ST := $TT<<space:; &SPACE>>"""

# total size of the values in the interpreted store, kept as a running maximum
_SPACE = """$S1 := nil; $TS := cons($ST, nil);
while $TS { $TT := hd $TS; $TS := tl $TS;
  if $TT { $S1 := cons(nil, $S1); $TS := cons(hd $TT, cons(tl $TT, $TS)) } };
$TT := $ST; while $TT { $S1 := tl $S1; $TT := tl $TT };
$S2 := $S1; $TT := $MX;
while $S2 { if $TT { $S2 := tl $S2; $TT := tl $TT } else { $MX := $S1; $S2 := nil } }"""

_FAIL = "$OK := nil"

_CHECK_STMT = _exact("$T", [
    "if $R { $W := cons(cons(%VN, hd $R), cons(cons(%VE, tl $R), $W)) } else { $OK := nil }",
    "if $R { $W := cons(cons(%VE, hd $R), cons(cons(%VL, tl $R), $W)) } else { $OK := nil }",
    "if $R { if tl $R { $W := cons(cons(%VE, hd $R), cons(cons(%VL, hd tl $R),"
    " cons(cons(%VL, tl tl $R), $W))) } else { $OK := nil } } else { $OK := nil }",
] + ["if $R { if tl $R { $W := cons(cons(%VN, hd $R), cons(cons(%VN, hd tl $R),"
     " cons(cons(%VN, tl tl $R), $W))) } else { $OK := nil } } else { $OK := nil }"] * 2,
    _FAIL)

_CHECK_EXPR = _exact("$T", [
    "$W := cons(cons(%VN, $R), $W)",
    "if $R { $OK := nil }",
    "if $R { $W := cons(cons(%VE, hd $R), cons(cons(%VE, tl $R), $W)) } else { $OK := nil }",
    "$W := cons(cons(%VE, $R), $W)",
    "$W := cons(cons(%VE, $R), $W)",
    "if $R { $W := cons(cons(%VE, hd $R), cons(cons(%VE, tl $R), $W)) } else { $OK := nil }",
], _FAIL)

_VALIDATE = f"""
$OK := cons(nil, nil);
if $P {{ if hd $P {{ $OK := nil }} }} else {{ $OK := nil }};
$W := cons(cons(%VL, tl $P), nil);
while $W {{
  $ITEM := hd $W; $W := tl $W; $KD := hd $ITEM; $D := tl $ITEM;
  {_chain("$KD", [
      "if $D { $W := cons(cons(%VS, hd $D), cons(cons(%VL, tl $D), $W)) }",
      f"if $D {{ $T := hd $D; $R := tl $D; {_CHECK_STMT} }} else {{ $OK := nil }}",
      f"if $D {{ $T := hd $D; $R := tl $D; {_CHECK_EXPR} }} else {{ $OK := nil }}",
      "while $D { if hd $D { $OK := nil }; $D := tl $D }",
  ])};
  if $OK {{ }} else {{ $W := nil }}
}};
"""

_EVAL_EXPR = """
<<time:$CNT := cons(nil, $CNT);>>
$T := hd $PAY; $R := tl $PAY;
""" + _chain("$T", [
    "&LOOKUP($V, $R); $VS := cons($V, $VS)",
    "$VS := cons(nil, $VS)",
    "$CS := cons(cons(%EXPR, hd $R), cons(cons(%EXPR, tl $R), cons(cons(%DOCONS, nil), $CS)))",
    "$CS := cons(cons(%EXPR, $R), cons(cons(%DOHD, nil), $CS))",
    "$CS := cons(cons(%EXPR, $R), cons(cons(%DOTL, nil), $CS))",
    "$CS := cons(cons(%EXPR, hd $R), cons(cons(%EXPR, tl $R), cons(cons(%DOEQ, nil), $CS)))",
])

_EXEC_STMT = """
$T := hd $PAY; $R := tl $PAY;
""" + _chain("$T", [
    """<<time:$CNT := cons(nil, $CNT);>>
    $CS := cons(cons(%EXPR, tl $R), cons(cons(%DOASSIGN, hd $R), $CS))""",
    """<<time:$CNT := cons(nil, $CNT);>>
    $CS := cons(cons(%EXPR, hd $R), cons(cons(%DOWHILE, $PAY), $CS))""",
    """<<time:$CNT := cons(nil, $CNT);>>
    $CS := cons(cons(%EXPR, hd $R), cons(cons(%DOIF, tl $R), $CS))""",
    "&LOOKUP($L, hd $R); $V := hd $L; &STORE(hd tl $R); $V := tl $L; &STORE(tl tl $R)",
    "&LOOKUP($L, hd $R); &LOOKUP($V, hd tl $R); $V := cons($L, $V); &STORE(tl tl $R)",
])

_POP = "$V := hd $VS; $VS := tl $VS; "

_STEP = _chain("$KD", [
    _EVAL_EXPR,
    _EXEC_STMT,
    "if $PAY { $CS := cons(cons(%STMT, hd $PAY), cons(cons(%BLOCK, tl $PAY), $CS)) }",
    _POP + "&STORE($PAY)",
    _POP + "$VS := cons(cons(hd $VS, $V), tl $VS)",
    "$VS := cons(hd hd $VS, tl $VS)",
    "$VS := cons(tl hd $VS, tl $VS)",
    _POP + "$VS := cons(eq?(hd $VS, $V), tl $VS)",
    _POP + "if $V { $CS := cons(cons(%BLOCK, tl tl $PAY), cons(cons(%STMT, $PAY), $CS)) }",
    _POP + "if $V { $CS := cons(cons(%BLOCK, hd $PAY), $CS) }"
           " else { $CS := cons(cons(%BLOCK, tl $PAY), $CS) }",
])

_MAIN = f"""
$P := hd X0; $A := tl X0;
{_VALIDATE}
if $OK {{
  $ST := cons($A, nil)<<space:; &SPACE>>;
  $CS := cons(cons(%BLOCK, tl $P), nil);
  while $CS {{
    $ITEM := hd $CS; $CS := tl $CS; $KD := hd $ITEM; $PAY := tl $ITEM;
    {_STEP}
  }};
  X0 := hd $ST<<time:; X0 := cons(X0, $CNT)>><<space:; X0 := cons(X0, $MX)>>
}} else {{ X0 := nil }}
"""


def render_source(variant: str = "plain") -> str:
    """Expand the template into concrete program text."""
    if variant not in ("plain", "time", "space"):
        raise ValueError(f"unknown interpreter variant {variant!r}")
    text = _MAIN
    text = re.sub(r"&LOOKUP\((\$\w+), ([^)]*)\)",
                  lambda m: _LOOKUP.format(dst=m.group(1), k=m.group(2)), text)
    text = re.sub(r"&STORE\(([^)]*)\)", lambda m: _STORE.format(k=m.group(1)), text)
    text = re.sub(r"<<(time|space):(.*?)>>",
                  lambda m: m.group(2) if m.group(1) == variant else "", text, flags=re.S)
    text = text.replace("&SPACE", _SPACE)
    text = re.sub(r"%(\w+)", lambda m: _literal(_TAGS[m.group(1)]), text)
    index = {name: k + 1 for k, name in enumerate(_VARS)}
    return re.sub(r"\$(\w+)", lambda m: f"X{index[m.group(1)]}", text)


@functools.lru_cache(maxsize=None)
def _build(variant: str) -> Program:
    return parse_program(render_source(variant))


def universal_program() -> Program:
    """``U`` with ``run(U, (code . a)) = run(decode(code), a)`` in value."""
    return _build("plain")


def counting_universal_program() -> Program:
    """Returns ``(result . time)`` with the time as a unary numeral."""
    return _build("time")


def space_universal_program() -> Program:
    """Returns ``(result . space)`` with the peak store size as a unary numeral."""
    return _build("space")


def dispatch_points(program: Program) -> tuple[object, object, int, object]:
    """Markers for attributing interpreter time to interpreted steps.

    Returns ``(entry, exit, stack_var, stmt_tag)``: ``entry`` is the first
    statement of the main dispatch loop's body, ``exit`` the statement run
    right after the loop, ``stack_var`` the control-stack variable and
    ``stmt_tag`` the tag of a statement item. ``program`` must contain one
    of the interpreters above (possibly composed with other code).
    """
    from .syntax import If, Var, While, iter_stmts
    from .tree import nat

    stack_var = _VARS.index("CS") + 1
    for s in iter_stmts(program.body):
        if isinstance(s, If):
            for block in (s.then, s.orelse):
                for i, t in enumerate(block):
                    if isinstance(t, While) and t.cond == Var(stack_var) and i + 1 < len(block):
                        return t.body[0], block[i + 1], stack_var, nat(_TAGS["STMT"])
    raise ValueError("no interpreter dispatch loop found")
