"""Run a program, read its time off the encoded trace, and recover the value by search."""

from moncomp import complexity as cx
from moncomp.machine import encode_program, format_tree, nat, cons, parse_program, run
from moncomp.machine.evaluators import extract_output

ADD = parse_program("split X0 into (X1, X2); while X1 { X2 := cons(nil, X2); X1 := tl X1 }; X0 := X2")

print("unary addition j + 3, time grows as 9j + 4:")
for j in range(6):
    out = run(ADD, cons(nat(j), nat(3)))
    print(f"  j={j}: time={out.time:3d} space={out.space:3d} configurations={len(out.trace.configs)}")

code, arg = encode_program(ADD), cons(nat(2), nat(1))
trace = cx.mu_search_effective(code, arg)
print("\nsearching for the trace of 2 + 1:")
print("  predicate accepts it:", cx.kleene_T(code, arg, trace))
print("  output read off the trace:", format_tree(extract_output(trace)))
print("  time measured from the trace:", cx.measure(cx.TIME, code, arg))

loop = parse_program("X1 := cons(nil, nil); while X1 { X0 := X0 }")
print("\na loop under fuel 100 halted:", run(loop, nat(0), 100).halted)
