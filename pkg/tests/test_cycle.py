from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_orbit, naive_outcome, table1_type
from taglab import POST, RunBudget, TagSystem
from taglab.cycle import (ConcatNotFound, IrregularOrbit, NoCycleWithinBudget, PeriodicSet, PeriodType,
                          UnclassifiableOrbit, classify_lengths, classify_period_type, collect_orbit,
                          concat_periodic, detect_cycle, harvest_orbits, has_period, periodic_set,
                          periodic_structure, search_small_class, shearer_period, shearer_word)

A, B = (0, 0), (1, 1, 0, 1)


def test_periodic_structure_positions():
    assert periodic_structure((0, 0, 1, 1, 0, 1), 3).symbols == (0, 1)
    assert periodic_structure((1, 0, 1, 0, 0), 3).symbols == (1, 0)
    assert periodic_structure((1, 0, 1, 0, 0, 1, 1), 3).length == 3
    with pytest.raises(ValueError):
        periodic_structure((), 3)


def test_post_golden_orbit_is_type1():
    orbit = periodic_set(POST, A + B)
    assert orbit.words == ((0, 0, 1, 1, 0, 1), (1, 0, 1, 0, 0))
    assert orbit.structure_lengths() == [2, 2]
    assert classify_period_type(orbit) is PeriodType.TYPE1
    assert table1_type(2, orbit.words, 3) == "Type1"


def test_classify_lengths_table():
    assert classify_lengths(2, [2, 2]) is PeriodType.TYPE1
    assert classify_lengths(3, [4, 5]) is PeriodType.TYPE2
    assert classify_lengths(6, [2, 5]) is PeriodType.TYPE3
    assert classify_lengths(7, [3, 5]) is PeriodType.TYPE4
    with pytest.raises(UnclassifiableOrbit):
        classify_lengths(6, [5, 6])
    assert PeriodType.TYPE1.regular and PeriodType.TYPE3.regular
    assert not PeriodType.TYPE2.regular and not PeriodType.TYPE4.regular


@st.composite
def binary_systems(draw):
    v = draw(st.integers(2, 5))
    apps = tuple(tuple(draw(st.lists(st.integers(0, 1), min_size=0, max_size=v + 3))) for _ in range(2))
    word = tuple(draw(st.lists(st.integers(0, 1), min_size=1, max_size=20)))
    return TagSystem(2, v, apps), word


@settings(max_examples=300, deadline=None)
@given(binary_systems())
def test_classifier_agrees_with_table_oracle(sw):
    system, word = sw
    kind, _, period, entry = naive_outcome(system.v, system.appendants, word, 5000, 2000)
    if kind != "Periodic":
        return
    p, members = naive_orbit(system.v, system.appendants, word)
    orbit = collect_orbit(system, word, period, entry)
    assert list(orbit.words) == members
    expected = table1_type(p, members, system.v)
    if expected is None:
        with pytest.raises(UnclassifiableOrbit):
            classify_period_type(orbit)
    else:
        assert classify_period_type(orbit).value == expected


def test_detect_cycle_reports_entry_and_period():
    info = detect_cycle(POST, A + B)
    assert (info.entry_step, info.period) == (0, 2)
    with pytest.raises(NoCycleWithinBudget):
        detect_cycle(POST, (0, 0, 0, 0))


def test_powers_of_ab_have_period_two():
    # (ab)^n -> 101 (ab)^(n-1) 00 -> (ab)^n for every n
    for n in range(1, 30):
        assert has_period(POST, (A + B) * n, 2)
        assert not has_period(POST, (A + B) * n, 2 * n) or n == 1


@pytest.mark.parametrize("n", [1, 2, 3, 5, 10, 25, 60])
def test_shearer_family_has_period_2n(n):
    word = shearer_word(n)
    assert shearer_period(n) == word
    kind, _, period, entry = naive_outcome(3, POST.appendants, word, 10**5, 10**5)
    assert (kind, period, entry) == ("Periodic", 2 * n, 0)


def test_shearer_word_shape():
    assert shearer_word(1) == A + B
    assert shearer_word(2) == B + B + A + A
    assert shearer_word(4) == A + B + A + B + B + B + A + A


def test_has_period_rejects_non_minimal_and_transient():
    assert has_period(POST, B + B + A + A, 4)
    assert not has_period(POST, B + B + A + A, 8)
    assert not has_period(POST, B + A, 6)


def test_watanabe_words_measured():
    # b^2 a^2: periodic from the start, period 4
    assert naive_outcome(3, POST.appendants, B + B + A + A, 10**4, 10**4)[2:] == (4, 0)
    # ba is not itself periodic: it enters a period-6 orbit after 15 steps
    assert naive_outcome(3, POST.appendants, B + A, 10**4, 10**4)[2:] == (6, 15)
    for n in range(4):
        word = B + B + A + A + A + (B + B + B + A + A + A) * n
        kind, _, period, entry = naive_outcome(3, POST.appendants, word, 10**5, 10**5)
        assert (kind, period) == ("Periodic", 6)
        out = detect_cycle(POST, word)
        assert (out.period, out.entry_step) == (period, entry)
        assert entry > 0


def test_concat_of_regular_orbits():
    first = periodic_set(POST, A + B)
    second = periodic_set(POST, B + B + A + A)
    word, period = concat_periodic(first, second, POST)
    kind, _, p, entry = naive_outcome(3, POST.appendants, word, 10**5, 10**5)
    assert (kind, p, entry) == ("Periodic", period, 0)
    assert period == 6


def test_concat_requires_regular_orbits():
    irregular = PeriodicSet(((0, 1, 1, 0, 1, 1, 0, 1, 1),), 3, 2)
    with pytest.raises((IrregularOrbit, UnclassifiableOrbit)):
        concat_periodic(irregular, irregular, TagSystem(2, 2, ((), (0, 1, 1))))


def test_concat_not_found_within_tiny_budget():
    first = periodic_set(POST, A + B)
    second = periodic_set(POST, B + B + A + A)
    with pytest.raises(ConcatNotFound):
        concat_periodic(first, second, POST, RunBudget(1, 100))


def test_mixed_orbit_in_post_system():
    orbit = periodic_set(POST, (1, 0, 0, 1, 0))
    assert orbit.period == 6
    assert sorted(orbit.structure_lengths()) == [5, 5, 5, 5, 5, 6]
    assert table1_type(6, orbit.words, 3) is None
    with pytest.raises(UnclassifiableOrbit):
        classify_period_type(orbit)


def test_irregular_orbit_in_ts22():
    # 0 -> empty, 1 -> 011: 1011011 -> 11011011 -> 011011011 -> 1011011
    system = TagSystem(2, 2, ((), (0, 1, 1)))
    word = (1, 0, 1, 1, 0, 1, 1)
    p, members = naive_orbit(2, system.appendants, word)
    assert p == 3 and [len(w) for w in members] == [7, 8, 9]
    assert table1_type(p, members, 2) == "Type2"
    assert classify_period_type(periodic_set(system, word)) is PeriodType.TYPE2


def test_irregular_orbit_in_ts22_with_nonempty_appendants():
    # 0 -> 1, 1 -> 0000: 1000011 -> 000110000 -> 01100001 -> 1000011, structure lengths 4, 5, 4
    system = TagSystem(2, 2, ((1,), (0, 0, 0, 0)))
    word = (1, 0, 0, 0, 0, 1, 1)
    p, members = naive_orbit(2, system.appendants, word)
    assert p == 3 and members[1] == (0, 0, 0, 1, 1, 0, 0, 0, 0)
    assert table1_type(p, members, 2) == "Type2"
    assert classify_period_type(periodic_set(system, word)) is PeriodType.TYPE2


def test_harvest_orbits_dedupes():
    words = [(A + B) * k for k in range(1, 6)] + [B + B + A + A, B + A]
    orbits, codes = harvest_orbits(POST, words)
    assert sorted(o.period for o in orbits) == [2, 2, 2, 2, 2, 4, 6]
    assert (codes == 3).all()
    assert len({(o.period, o.key) for o in orbits}) == len(orbits)


def test_small_class_search_counts_are_consistent():
    res = search_small_class(v=2, max_appendant=2, max_word=6, max_steps=500)
    assert res.orbits == sum(res.type_counts.values()) + res.unclassifiable
    assert res.systems_searched > 0
    assert len(res.irregular) == res.type_counts["Type2"] + res.type_counts["Type4"]


def test_orbit_record_shape():
    rec = periodic_set(POST, A + B).to_record(2, PeriodType.TYPE1)
    assert rec == {"words": ["001101", "10100"], "p": 2, "structures": ["01", "10"], "type": "Type1"}
    assert np.array_equal(np.array(PeriodicSet(((0, 1),), 1, 2).structure_lengths()), [1])
