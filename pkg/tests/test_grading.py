import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from moncomp import grading as gr
from moncomp.grading import INF_NAT, Monoid, canonicalize, leq, leq_O, leq_plus, meet, nat, oplus

x = sympy.Symbol("x", nonnegative=True)


def as_expr(coeffs):
    return sum(c * x**i for i, c in enumerate(coeffs))


def plus_oracle(f, g):
    """f - g is bounded above on [0, oo) iff its limit is not +oo."""
    return sympy.limit(as_expr(f) - as_expr(g), x, sympy.oo) != sympy.oo


def o_oracle(f, g):
    if not any(g):
        return not any(f)
    return sympy.limit(as_expr(f) / as_expr(g), x, sympy.oo) != sympy.oo


coeffs = st.lists(st.integers(0, 4), max_size=4)
nats = st.one_of(st.integers(0, 50).map(nat), st.just(INF_NAT))


def test_oplus_examples():
    assert oplus(INF_NAT, nat(5)).is_inf
    assert oplus(gr.zero(Monoid.NAT), nat(7)) == nat(7)
    assert oplus(gr.poly_plus([1, 2]), gr.poly_plus([3, 0, 4])) == gr.poly_plus([4, 2, 4])
    assert oplus(gr.multiset(["a"]), gr.multiset(["b", "a"])) == gr.multiset(["a", "a", "b"])


def test_leq_examples():
    assert leq(nat(3), INF_NAT)
    assert not leq(INF_NAT, nat(3))
    assert leq(nat(4), nat(4))
    assert not leq(gr.poly_plus([0, 2]), gr.poly_plus([1, 1]))


def test_leq_poly_matches_witness_search():
    # the induced order on poly+ by brute-force search for a witness l with l + m = n
    vecs = [list(v) for v in itertools.product(range(3), repeat=2)]
    for m, n in itertools.product(vecs, repeat=2):
        found = any(oplus(gr.poly_plus(l), gr.poly_plus(m)) == gr.poly_plus(n)
                    for l in itertools.product(range(3), repeat=2))
        assert leq(gr.poly_plus(m), gr.poly_plus(n)) == found


def test_meet_examples():
    assert meet(nat(4), INF_NAT) == nat(4)
    assert meet(nat(9), nat(9)) == nat(9)
    assert meet(gr.poly_plus([2, 5]), gr.poly_plus([3, 1])) == gr.poly_plus([2, 1])


def test_meet_is_maximum_of_brute_force_lower_bounds():
    m, n = gr.poly_plus([2, 5]), gr.poly_plus([3, 1])
    lower = [gr.poly_plus(c) for c in itertools.product(range(6), repeat=2)
             if leq(gr.poly_plus(c), m) and leq(gr.poly_plus(c), n)]
    top = [c for c in lower if all(leq(d, c) for d in lower)]
    assert top == [meet(m, n)]


def test_asymptotic_examples():
    assert leq_plus(gr.poly_plus([7]), gr.poly_plus([0]))
    assert leq_plus(gr.poly_plus([0, 1]), gr.poly_plus([0, 0, 1]))
    assert not leq_plus(gr.poly_plus([0, 0, 1]), gr.poly_plus([0, 1]))
    assert leq_O(gr.poly_O([0, 3]), gr.poly_O([0, 0, 1]))
    assert not leq_O(gr.poly_O([0, 0, 1]), gr.poly_O([0, 9]))


def test_leq_plus_does_not_ignore_linear_terms():
    # x is not within a constant of 0, even though both are "small"
    assert not leq_plus(gr.poly_plus([0, 1]), gr.poly_plus([]))
    assert leq_plus(gr.poly_plus([0, 2, 1]), gr.poly_plus([0, 3, 1]))
    assert not leq_plus(gr.poly_plus([0, 2, 1]), gr.poly_plus([5, 1, 1]))


def test_canonicalize_examples():
    assert canonicalize(nat(5)) == nat(5)
    assert canonicalize(gr.poly_plus([4, 2])) == gr.poly_plus([0, 2])
    assert canonicalize(gr.Grade(Monoid.POLY_O, (1, 7, 3))) == gr.poly_O([0, 0, 1])


def test_mixed_monoids_rejected():
    with pytest.raises(gr.GradingError):
        oplus(nat(1), gr.poly_plus([1]))
    with pytest.raises(gr.GradingError):
        leq_plus(gr.poly_O([1]), gr.poly_plus([1]))
    with pytest.raises(gr.GradingError):
        nat(-1)


def test_json_round_trip():
    for g in [nat(3), INF_NAT, gr.multiset(["x", "x"]), gr.poly_plus([1, 0, 2]),
              gr.infinity(Monoid.POLY_O), gr.poly_O([0, 4])]:
        assert gr.Grade.from_json(g.to_json()) == g


@given(nats, nats, nats)
def test_nat_monoid_laws(a, b, c):
    assert oplus(a, oplus(b, c)) == oplus(oplus(a, b), c)
    assert oplus(a, b) == oplus(b, a)
    assert meet(a, b) == meet(b, a)
    assert leq(meet(a, b), a)


@given(coeffs, coeffs)
def test_leq_plus_matches_limit_oracle(f, g):
    assert leq_plus(gr.poly_plus(f), gr.poly_plus(g)) == plus_oracle(f, g)


@given(coeffs, coeffs)
def test_leq_O_matches_limit_oracle(f, g):
    assert leq_O(gr.poly_O(f), gr.poly_O(g)) == o_oracle(f, g)


@given(coeffs)
def test_canonical_form_is_equivalent(f):
    p = gr.poly_plus(f)
    c = canonicalize(p)
    assert leq_plus(p, c) and leq_plus(c, p)
    assert canonicalize(c) == c


@given(coeffs, coeffs)
def test_plus_quotient_is_antisymmetric(f, g):
    p, q = gr.poly_plus(f), gr.poly_plus(g)
    if leq_plus(p, q) and leq_plus(q, p):
        assert canonicalize(p) == canonicalize(q)


@given(st.lists(st.sampled_from("abc"), max_size=5), st.lists(st.sampled_from("abc"), max_size=5))
def test_multiset_witness(a, b):
    m, n = gr.multiset(a), gr.multiset(b)
    w = gr.leq_witness(m, n)
    assert (w is not None) == leq(m, n)
    if w is not None:
        assert oplus(w, m) == n
