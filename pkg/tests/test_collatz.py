from __future__ import annotations

import pytest

from oracles import collatz_shortcut_orbit, collatz_tag_phases
from taglab.collatz import (OracleMismatch, Verdict, collatz_sweep, encode, run_collatz,
                            shortcut_collatz_oracle)
from taglab.core import OutcomeKind, run
from taglab.system import COLLATZ


def test_shortcut_map():
    assert [shortcut_collatz_oracle(n) for n in (1, 2, 3, 6, 7)] == [2, 1, 5, 3, 11]
    with pytest.raises(ValueError):
        shortcut_collatz_oracle(0)


def test_small_phases():
    assert run_collatz(3).phases == [3, 5, 8, 4, 2, 1]
    assert run_collatz(1).phases == [1]
    assert run_collatz(1).verdict is Verdict.REACHED_ONE


@pytest.mark.parametrize("n", list(range(1, 60)) + [97, 171, 255])
def test_two_routes_agree(n):
    # route 1: symbol-by-symbol deque simulation; route 2: compressed interpreter
    trace = run_collatz(n)
    assert trace.phases == collatz_tag_phases(n)
    assert trace.phases == collatz_shortcut_orbit(n)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 27])
def test_step_count_matches_plain_kernel(n):
    out = run(COLLATZ, encode(n), detect_cycles=False)
    assert out.kind is OutcomeKind.HALTED
    trace = run_collatz(n)
    assert trace.tag_steps == out.steps
    assert trace.max_word_length == out.max_length


def test_large_start_reduces_exactly():
    n = 2**40 + 1
    trace = run_collatz(n, max_phases=50)
    assert trace.phases == collatz_shortcut_orbit(n)[:50]
    assert trace.verdict is Verdict.BUDGET_EXHAUSTED


def test_sweep_summary():
    summary = collatz_sweep(300)
    assert summary.verified == 300
    assert not summary.exhausted
    assert summary.max_phases == max(len(collatz_shortcut_orbit(n)) for n in range(1, 301))


def test_mismatch_is_an_exception_type():
    err = OracleMismatch(5, 2, 8, 9)
    assert (err.n0, err.index, err.expected, err.got) == (5, 2, 8, 9)
