"""The interpreter written in the language itself, and its affine overhead."""

import random

from moncomp import complexity as cx
from moncomp.corpus import LOOP_GUARD, MAX_NODES
from moncomp.machine import cons, encode_program, run
from moncomp.machine.universal import universal_program
from moncomp.suites import corpus_pairs

U = universal_program()
pairs = corpus_pairs(random.Random(1), 40)
corpus = [(encode_program(p), a) for p, a, _ in pairs]
calibration = cx.calibrate_chi(corpus[:20], MAX_NODES, LOOP_GUARD, interpreter=U)
chi = calibration.chi
print(f"per interpreted step: u <= {calibration.p:.0f} * cost + {calibration.q:.0f}")
print(f"bound: time(U) <= {chi.alpha:.0f} * t + {chi.beta:.0f}\n")
print("    t   time(U)   bound   value ok")
for (code, a), (p, _, o) in zip(corpus[20:], pairs[20:]):
    u = run(U, cons(code, a))
    print(f"{o.time:5d} {u.time:9d} {chi.bound(o.time):7.0f}   {u.value is o.value}")
