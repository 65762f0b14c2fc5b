from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taglab import POST, RunBudget, TagSystem
from taglab.generator import (ClassSpec, Reason, ScreenOutcome, balance, candidate_rng, decidability_screen,
                              generate_candidates, pilot_runs, sample_system, screen)


def naive_balance(system: TagSystem) -> int:
    total = 0
    for symbol in range(system.mu):
        occurrences = sum(w.count(symbol) for w in system.appendants)
        total += occurrences * (len(system.appendants[symbol]) - system.v)
    return total


def test_decidability_reasons():
    assert decidability_screen(POST) is None
    assert decidability_screen(TagSystem.from_rules(2, "00", "11")) is Reason.LMIN_GE_V
    assert decidability_screen(TagSystem.from_rules(2, "011", "")) is Reason.TS22
    assert decidability_screen(TagSystem.from_rules(1, "00", "1")) is Reason.V1
    assert decidability_screen(TagSystem.from_rules(3, "0", "11")) is Reason.LMAX_LE_V
    assert decidability_screen(TagSystem(1, 3, ((0, 0, 0, 0, 0),))) is Reason.LMIN_GE_V
    assert decidability_screen(TagSystem(1, 3, ((),))) is Reason.LMAX_LE_V


def test_balance_examples():
    assert balance(POST) == 0
    assert balance(TagSystem(1, 1, ((0, 0),))) == 2
    assert balance(TagSystem.from_rules(3, "", "0")) == -3


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.integers(1, 8), st.data())
def test_balance_matches_naive_recount(mu, v, data):
    apps = tuple(tuple(data.draw(st.lists(st.integers(0, mu - 1), max_size=10))) for _ in range(mu))
    system = TagSystem(mu, v, apps)
    assert balance(system) == naive_balance(system)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_sampled_systems_respect_spec(seed):
    spec = ClassSpec(2, 3, 15, 4)
    system = sample_system(spec, candidate_rng(seed, 0))
    assert 3 <= system.v <= 15
    assert 1 <= system.l_max - system.v <= 4
    assert 1 <= system.v - system.l_min <= 4


def test_post_is_rejected_by_pilot_runs():
    outcome, kinds = pilot_runs(POST, candidate_rng(0, 0))
    assert outcome is ScreenOutcome.REJECTED_PILOT
    assert kinds[-1] in ("Halted", "Periodic")


def test_pilot_any_mode_needs_one_survivor():
    grow = TagSystem.from_rules(3, "0", "111111")
    outcome, kinds = pilot_runs(grow, candidate_rng(0, 0), n_words=3, word_length=30,
                                budget=RunBudget(1000, 10**6), survive="any")
    assert outcome is ScreenOutcome.SELECTED
    outcome, _ = pilot_runs(grow, candidate_rng(0, 0), n_words=3, word_length=30,
                            budget=RunBudget(10**6, 200), survive="any")
    assert outcome is ScreenOutcome.REJECTED_GROWTH


def test_screen_order_and_invariant():
    report = screen(TagSystem.from_rules(2, "00", "11"))
    assert report.decidable_reason is Reason.LMIN_GE_V
    assert report.screen_outcome is ScreenOutcome.REJECTED_DECIDABLE
    unbalanced = TagSystem.from_rules(3, "0", "11111")
    assert screen(unbalanced).screen_outcome is ScreenOutcome.REJECTED_BALANCE
    negative = TagSystem.from_rules(3, "0001", "1")
    assert balance(negative) == -1
    assert screen(negative).screen_outcome is ScreenOutcome.REJECTED_BALANCE
    relaxed = screen(negative, candidate_rng(0, 0), "le0", pilot_words=2, pilot_length=30,
                     budget=RunBudget(1000, 15000))
    assert relaxed.screen_outcome is not ScreenOutcome.REJECTED_BALANCE
    with pytest.raises(ValueError):
        screen(POST, balance_mode="lt0")


def test_v1_class_yields_no_candidates():
    cands = generate_candidates(ClassSpec(2, 1, 1, 4), seed=3, count=25)
    assert all(c.report.decidable_reason is Reason.V1 for c in cands)
    assert not any(c.selected for c in cands)


def test_generation_is_reproducible():
    kwargs = dict(seed=42, count=40, pilot_words=4, pilot_length=60, budget=RunBudget(20_000, 15_000))
    a = generate_candidates(ClassSpec(), **kwargs)
    b = generate_candidates(ClassSpec(), **kwargs)
    dump = lambda cs: [json.dumps([c.system.to_text(), c.report.to_json()]) for c in cs]  # noqa: E731
    assert dump(a) == dump(b)
    for c in a:
        if c.selected:
            assert balance(c.system) == 0
            assert decidability_screen(c.system) is None
            assert all(k == "BudgetExhausted" for k in c.report.pilot_kinds)
        if c.report.decidable_reason is not None:
            assert c.report.screen_outcome is ScreenOutcome.REJECTED_DECIDABLE


def test_class_spec_validation():
    with pytest.raises(ValueError):
        ClassSpec(2, 5, 3)
    with pytest.raises(ValueError):
        ClassSpec(2, 3, 5, 0)
