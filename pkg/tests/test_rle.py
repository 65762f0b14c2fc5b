from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import deque_trajectory, naive_outcome
from taglab import RunBudget, TagSystem
from taglab.rle import CompressedTape, primitive_root, run_compressed


@st.composite
def repetitive_case(draw):
    mu = draw(st.integers(1, 3))
    v = draw(st.integers(1, 4))
    apps = tuple(tuple(draw(st.lists(st.integers(0, mu - 1), max_size=6))) for _ in range(mu))
    runs = draw(st.lists(st.tuples(st.lists(st.integers(0, mu - 1), min_size=1, max_size=4).map(tuple),
                                   st.integers(0, 40)), max_size=4))
    return TagSystem(mu, v, apps), runs


def test_primitive_root():
    assert primitive_root((0, 1, 0, 1)) == ((0, 1), 2)
    assert primitive_root((0, 0, 1)) == ((0, 0, 1), 1)
    assert primitive_root((2,) * 7) == ((2,), 7)


@settings(max_examples=400, deadline=None)
@given(repetitive_case(), st.integers(1, 3000), st.integers(5, 400))
def test_compressed_run_matches_plain_simulation(case, max_steps, max_length):
    system, runs = case
    word = tuple(s for pattern, count in runs for s in pattern * count)
    tape = CompressedTape.from_runs(system, runs)
    assert tape.word() == word
    out = run_compressed(system, word, RunBudget(max_steps, max_length))
    kind, decided, _, _ = naive_outcome(system.v, system.appendants, word, max_steps, max_length)
    if kind == "Periodic":
        # the compressed interpreter does not look for cycles; it runs on to the budget or bound
        traj = deque_trajectory(system.v, system.appendants, word, max_steps)
        assert out.kind.value in ("BudgetExhausted", "LengthBoundExceeded")
        if out.kind.value == "BudgetExhausted":
            assert out.word == traj[max_steps]
            assert out.max_length == max(len(w) for w in traj)
        return
    assert out.kind.value == kind
    assert out.steps == decided
    traj = deque_trajectory(system.v, system.appendants, word, decided)
    assert out.word == traj[decided]
    assert out.max_length == max(len(w) for w in traj)


def test_large_power_is_batched():
    system = TagSystem.from_rules(2, "12", "0", "000")
    tape = CompressedTape.from_runs(system, [((0,), 10**12)])
    tape.macro_step()
    # half of the zeros are consumed in one batch, producing (12)^(n/2)
    assert tape.steps == 5 * 10**11
    assert tape.runs[0][0] == (1, 2)
    assert tape.length == 10**12
