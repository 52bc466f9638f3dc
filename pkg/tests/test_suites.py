import pytest

from moncomp import suites


@pytest.mark.parametrize("name", sorted(suites.SUITES))
def test_suite_is_green_at_small_scale(name):
    results = suites.run_suite(name, seed=11, cases=15)
    assert len(results) == len(suites.SUITES[name])
    for r in results:
        assert r.ok, (r.name, r.examples)
        assert r.cases > 0


def test_suites_are_reproducible():
    a = [r.to_json() for r in suites.run_suite("grading", seed=3, cases=10)]
    b = [r.to_json() for r in suites.run_suite("grading", seed=3, cases=10)]
    for x, y in zip(a, b):
        x.pop("seconds"), y.pop("seconds")
    assert a == b


def test_failures_keep_examples():
    res = suites.LawResult("x", "law")
    for i in range(5):
        res.check(False, lambda i=i: f"case {i}")
    assert res.failures == 5 and res.examples == ["case 0", "case 1", "case 2"]
    assert not res.ok and res.to_json()["ok"] is False


def test_unknown_suite():
    with pytest.raises(KeyError):
        suites.run_suite("nope")
