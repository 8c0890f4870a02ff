import pytest

from freeeuler.checks import (
    DEFAULT_SUITES,
    SUITES,
    all_pairings,
    brute_force_trace,
    catalan,
    is_noncrossing,
    run_suite,
)

# the slow suites get fewer trials here; the acceptance suite runs them in full
TRIALS = {"vorticity-transport": 2, "energy": 3, "leray": 5, "trace-oracle": 40, "roundtrip": 30}


@pytest.mark.parametrize("name", DEFAULT_SUITES)
def test_default_suites_pass(name):
    result = run_suite(name, seed=1, trials=TRIALS.get(name, 8))
    assert result.passed, result.failures[:3]
    assert result.trials > 0


def test_literal_sign_suite_fails():
    # the two sides come out exactly negated
    result = run_suite("lemma1-literal", seed=1, trials=5)
    assert not result.passed
    assert len(result.failures) == 5


def test_suites_are_deterministic():
    a = run_suite("lemma1", seed=3, trials=4)
    b = run_suite("lemma1", seed=3, trials=4)
    assert a.summary() == b.summary()


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")
    assert "lemma1-literal" in SUITES and "lemma1-literal" not in DEFAULT_SUITES


def test_pairing_helpers():
    assert len(list(all_pairings(6))) == 15
    assert sum(is_noncrossing(p) for p in all_pairings(6)) == catalan(3) == 5
    assert brute_force_trace((1, 2, 2, 1)) == 1
    assert brute_force_trace((1, 2, 1, 2)) == 0
    assert [catalan(m) for m in range(6)] == [1, 1, 2, 5, 14, 42]
