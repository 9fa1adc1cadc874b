"""Smoke tests for the python module: the main operations work end to end
and verdicts agree with the values the C++ suite froze."""

import pytest

import evsync

DOUBLE_TRUE = "inv 0 O tas\ninv 1 O tas\nres 0 O tas T\nres 1 O tas T\n"


def test_registries():
    types = evsync.builtin_types()
    assert {"register", "consensus", "tas", "faa", "fac"} <= set(types)
    algos = evsync.algorithms()
    assert "ev-tas" in algos and "2fac" in algos


def test_replay_tas_returns_true_exactly_once():
    rets, state = evsync.replay("tas", "tas", times=3)
    assert rets == ["T", "F", "F"]
    assert state == "1"


def test_replay_fac_prepends_and_returns_prior_list():
    rets, state = evsync.replay("fac", "fac", args=[5], times=2)
    assert rets == ["[]", "[5]"]
    assert state == "[5,5]"


def test_run_produces_canonical_trace_text():
    trace = evsync.run("ev-tas", procs=2, ops=1, schedule="rr")
    assert trace.startswith("inv ")
    assert evsync.normalize(trace) == trace
    # Explicit schedule text drives one process to completion alone.
    solo = evsync.run("ev-tas", schedule="start 0, step 0, step 0, step 0")
    assert solo == "inv 0 O tas\nres 0 O tas T\n"


def test_check_agrees_with_frozen_verdicts():
    verdict = evsync.check(DOUBLE_TRUE, "tas")
    assert verdict["well_formed"]
    assert verdict["weakly_consistent"]
    assert verdict["minimal_t"] == 3
    assert "lin " in verdict["witness"]
    assert "MIN_T: 3" in verdict["report"]

    assert evsync.weakly_consistent(DOUBLE_TRUE, "tas")
    assert evsync.t_linearizable(DOUBLE_TRUE, 0, "tas") is None
    assert evsync.t_linearizable(DOUBLE_TRUE, 3, "tas") is not None


def test_run_then_check_round_trip():
    trace = evsync.run("ev-consensus", procs=2, ops=1, schedule="seed:11")
    verdict = evsync.check(trace, "consensus")
    assert verdict["weakly_consistent"]
    assert verdict["minimal_t"] is not None


def test_explorers():
    found = evsync.find_non_linearizable("ev-tas", depth=10)
    assert found is not None
    assert found["trace"].count("\n") == 4
    assert "res 1 O tas T" in found["trace"]

    assert evsync.find_non_linearizable("universal:faa", depth=12) is None
    assert evsync.prefix_safety("2fac", depth=10, t=0) == 0

    stable = evsync.find_stable("ev-tas", depth=4, horizon=8)
    assert stable and all(c["events"] >= 0 for c in stable)


def test_exceptions_form_a_hierarchy():
    assert issubclass(evsync.ParseError, evsync.Error)
    assert issubclass(evsync.TooLarge, evsync.Error)
    with pytest.raises(evsync.ParseError):
        evsync.normalize("inv 0 O tas\nnot an event\n")
    with pytest.raises(evsync.Error):
        evsync.run("no-such-algorithm")
    with pytest.raises(evsync.TooLarge):
        evsync.check(DOUBLE_TRUE, "tas", cap=1)
    with pytest.raises(evsync.Error):
        evsync.run("2fac", procs=3)
