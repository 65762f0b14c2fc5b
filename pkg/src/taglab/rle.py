"""Exact interpreter over run-length compressed words.

A word is kept as a deque of ``[pattern, count]`` runs, each pattern a
primitive word (not a power of a shorter one), so that highly repetitive
words such as the unary Collatz encodings stay small. When the leading run
holds at least one full super-period of ``lcm(len(pattern), v)`` symbols, the
scanned symbols within it repeat and many steps are applied at once; the
result is identical to iterating ``step``, including exact step counts and
the maximum length reached.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from math import lcm
from typing import Sequence

from .core import OutcomeKind, RunBudget, RunOutcome
from .system import TagSystem, Word

UNBOUNDED = 1 << 62


@lru_cache(maxsize=1 << 14)
def primitive_root(word: Word) -> tuple[Word, int]:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d], n // d
    return word, 1


@dataclass(frozen=True)
class _Batch:
    reps: int          # pattern repetitions consumed per super-period
    steps: int         # steps per super-period
    root: Word         # appended output per super-period, as root ** root_reps
    root_reps: int
    growth: int        # length change per super-period
    peak: int          # max prefix length change within one super-period


class CompressedTape:
    def __init__(self, system: TagSystem, word: Sequence[int]):
        self.system = system
        self.runs: deque[list] = deque()
        self.length = 0
        self.steps = 0
        self.max_length_seen = 0
        self._batches: dict[Word, _Batch] = {}
        for s in system.check_word(word):
            self._push_back((s,), 1)
        self.length = len(word)
        self.max_length_seen = self.length

    @classmethod
    def from_runs(cls, system: TagSystem, runs: Sequence[tuple[Word, int]]) -> "CompressedTape":
        tape = cls(system, ())
        for pattern, count in runs:
            system.check_word(pattern)
            if count <= 0:
                continue
            tape._push_back(tuple(pattern), count)
            tape.length += len(pattern) * count
        tape.max_length_seen = tape.length
        return tape

    def _push_back(self, pattern: Word, count: int) -> None:
        root, r = primitive_root(pattern)
        if self.runs and self.runs[-1][0] == root:
            self.runs[-1][1] += r * count
        else:
            self.runs.append([root, r * count])

    def _push_front(self, pattern: Word, count: int) -> None:
        root, r = primitive_root(pattern)
        if self.runs and self.runs[0][0] == root:
            self.runs[0][1] += r * count
        else:
            self.runs.appendleft([root, r * count])

    def _delete_front(self, d: int) -> None:
        runs = self.runs
        while d:
            pattern, count = runs[0]
            size = len(pattern)
            if d >= size * count:
                runs.popleft()
                d -= size * count
                continue
            full, r = divmod(d, size)
            count -= full
            d = 0
            if r == 0:
                runs[0][1] = count
            else:
                # P^c minus its first r symbols == (P[r:] P[:r])^(c-1) P[r:]
                runs.popleft()
                self._push_front(pattern[r:], 1)
                if count > 1:
                    self._push_front(pattern[r:] + pattern[:r], count - 1)

    def word(self) -> Word:
        out: list[int] = []
        for pattern, count in self.runs:
            out.extend(pattern * count)
        return tuple(out)

    def is_power_of(self, symbol: int) -> bool:
        if len(self.runs) == 1:
            return self.runs[0][0] == (symbol,)
        return all(p == (symbol,) for p, _ in self.runs)

    def _batch(self, pattern: Word) -> _Batch:
        b = self._batches.get(pattern)
        if b is None:
            v = self.system.v
            size = len(pattern)
            g = lcm(size, v)
            scanned = [pattern[(j * v) % size] for j in range(g // v)]
            out: tuple[int, ...] = ()
            level = peak = 0
            for a in scanned:
                out += self.system.appendants[a]
                level += len(self.system.appendants[a]) - v
                peak = max(peak, level)
            root, rr = primitive_root(out) if out else ((), 0)
            b = _Batch(g // size, g // v, root, rr, level, peak)
            self._batches[pattern] = b
        return b

    def single_step(self) -> None:
        a = self.runs[0][0][0]
        w = self.system.appendants[a]
        if w:
            self._push_back(w, 1)
        self._delete_front(self.system.v)
        self.length += len(w) - self.system.v
        self.steps += 1
        self.max_length_seen = max(self.max_length_seen, self.length)

    def macro_step(self, max_steps: int = UNBOUNDED, max_length: int = UNBOUNDED) -> OutcomeKind | None:
        """Apply one batch (or a single step); returns the terminal kind if the run is decided."""
        if self.length > max_length:
            return OutcomeKind.LENGTH_BOUND_EXCEEDED
        if self.length < self.system.v:
            return OutcomeKind.HALTED
        if self.steps >= max_steps:
            return OutcomeKind.BUDGET_EXHAUSTED
        pattern, count = self.runs[0]
        b = self._batch(pattern)
        k = min(count // b.reps, (max_steps - self.steps) // b.steps)
        if k > 0 and b.growth > 0:
            # the peak is reached in the last super-period; cap it at the length bound
            room = max_length - self.length - b.peak
            k = min(k, room // b.growth + 1) if room >= 0 else 0
        elif k > 0 and self.length + b.peak > max_length:
            k = 0
        if k == 0:
            self.single_step()
            return None
        peak = self.length + b.peak + (k - 1) * max(b.growth, 0)
        self.max_length_seen = max(self.max_length_seen, peak)
        left = count - k * b.reps
        if left:
            self.runs[0][1] = left
        else:
            self.runs.popleft()
        if b.root_reps:
            self._push_back(b.root, k * b.root_reps)
        self.length += k * b.growth
        self.steps += k * b.steps
        return None


def run_compressed(system: TagSystem, word: Sequence[int], budget: RunBudget = RunBudget()) -> RunOutcome:
    """Run without cycle detection; Halted, LengthBoundExceeded or BudgetExhausted."""
    tape = CompressedTape(system, word)
    while (kind := tape.macro_step(budget.max_steps, budget.max_length)) is None:
        pass
    return RunOutcome(kind, tape.steps, max_length=tape.max_length_seen, word=tape.word())
