"""The Collatz problem as a 2-tag system on three symbols.

``0 -> 12, 1 -> 0, 2 -> 000`` run from the unary word ``0^n`` passes through
``0^m`` for each successive value ``m`` of the shortcut map
``n -> n/2 | (3n+1)/2``. Every pure ``0``-power on the trajectory is read off
as a phase and checked against integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .core import OutcomeKind, RunBudget
from .rle import UNBOUNDED, CompressedTape
from .system import COLLATZ, Word

COLLATZ_BUDGET = RunBudget(max_steps=10**18, max_length=UNBOUNDED)


class Verdict(str, Enum):
    REACHED_ONE = "ReachedOne"
    BUDGET_EXHAUSTED = "BudgetExhausted"


class OracleMismatch(RuntimeError):
    def __init__(self, n0: int, index: int, expected: int, got: int):
        super().__init__(f"n={n0}: phase {index} is {got}, shortcut map gives {expected}")
        self.n0 = n0
        self.index = index
        self.expected = expected
        self.got = got


@dataclass
class CollatzTrace:
    n0: int
    phases: list[int] = field(default_factory=list)
    tag_steps: int = 0
    verdict: Verdict = Verdict.BUDGET_EXHAUSTED
    max_word_length: int = 0


def shortcut_collatz_oracle(n: int) -> int:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return n // 2 if n % 2 == 0 else (3 * n + 1) // 2


def encode(n: int) -> Word:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return (0,) * n


def run_collatz(n: int, max_phases: int = 100_000, budget: RunBudget = COLLATZ_BUDGET) -> CollatzTrace:
    """Run the tag system from ``0^n`` and read off phases; raises OracleMismatch on disagreement."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    tape = CompressedTape.from_runs(COLLATZ, [((0,), n)])
    trace = CollatzTrace(n, [n])
    while True:
        kind = tape.macro_step(budget.max_steps, budget.max_length)
        if kind is not None:
            if kind is OutcomeKind.HALTED and trace.phases[-1] == 1:
                trace.verdict = Verdict.REACHED_ONE
            elif kind is OutcomeKind.HALTED:
                # only 0^1 may halt under the shortcut map; anything else is a broken reduction
                raise OracleMismatch(n, len(trace.phases), 1, trace.phases[-1])
            break
        if tape.is_power_of(0):
            m = tape.length
            expected = shortcut_collatz_oracle(trace.phases[-1])
            if m != expected:
                raise OracleMismatch(n, len(trace.phases), expected, m)
            trace.phases.append(m)
            if len(trace.phases) >= max_phases and m != 1:
                break
    trace.tag_steps = tape.steps
    trace.max_word_length = tape.max_length_seen
    return trace


@dataclass
class SweepSummary:
    verified: int = 0
    max_phases: int = 0
    max_word_length: int = 0
    total_tag_steps: int = 0
    exhausted: list[int] = field(default_factory=list)


def iter_collatz(n_max: int, max_phases: int = 100_000, budget: RunBudget = COLLATZ_BUDGET) -> Iterator[CollatzTrace]:
    for n in range(1, n_max + 1):
        yield run_collatz(n, max_phases, budget)


def collatz_sweep(n_max: int, max_phases: int = 100_000, budget: RunBudget = COLLATZ_BUDGET) -> SweepSummary:
    """Run every ``1 <= n <= n_max``; an OracleMismatch aborts the sweep."""
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")
    summary = SweepSummary()
    for trace in iter_collatz(n_max, max_phases, budget):
        summarize(summary, trace)
    return summary


def summarize(summary: SweepSummary, trace: CollatzTrace) -> None:
    if trace.verdict is Verdict.REACHED_ONE:
        summary.verified += 1
    else:
        summary.exhausted.append(trace.n0)
    summary.max_phases = max(summary.max_phases, len(trace.phases))
    summary.max_word_length = max(summary.max_word_length, trace.max_word_length)
    summary.total_tag_steps += trace.tag_steps
