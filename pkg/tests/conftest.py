import random

from hypothesis import HealthCheck, settings, strategies as st

from moncomp.corpus import random_input, random_program
from moncomp.machine.tree import NIL, cons

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def trees(max_leaves: int = 8):
    return st.recursive(st.just(NIL), lambda inner: st.builds(cons, inner, inner),
                        max_leaves=max_leaves)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def programs(draw, family: str = "halting"):
    return random_program(random.Random(draw(seeds)), family)


@st.composite
def inputs(draw):
    return random_input(random.Random(draw(seeds)))


# acceptance criteria report one line each, repeated in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
