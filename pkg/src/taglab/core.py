"""Exact tag-system semantics and the budgeted runner.

Halting convention: a word shorter than ``v`` (including the empty word) is
terminal. No partial step is ever performed on it.

Step counting starts at 0 for the initial word; the transition
``A_i -> A_(i+1)`` is one step.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .system import TagSystem, Word

UNBOUNDED = 1 << 62


class OutcomeKind(str, Enum):
    HALTED = "Halted"
    PERIODIC = "Periodic"
    LENGTH_BOUND_EXCEEDED = "LengthBoundExceeded"
    BUDGET_EXHAUSTED = "BudgetExhausted"


_KIND_OF_CODE = {
    K.HALTED: OutcomeKind.HALTED,
    K.CYCLE: OutcomeKind.PERIODIC,
    K.LENGTH: OutcomeKind.LENGTH_BOUND_EXCEEDED,
    K.LIMIT: OutcomeKind.BUDGET_EXHAUSTED,
}


class EarlyTermination(RuntimeError):
    def __init__(self, step: int, kind: OutcomeKind):
        super().__init__(f"run ended with {kind.value} at step {step}")
        self.step = step
        self.kind = kind


@dataclass(frozen=True)
class RunBudget:
    max_steps: int = 10_000_000
    max_length: int = 15_000

    def __post_init__(self) -> None:
        if self.max_steps < 1 or self.max_length < 1:
            raise ValueError(f"budget bounds must be positive: {self}")


@dataclass(frozen=True)
class RunOutcome:
    """Terminal classification of a run.

    ``steps`` is the step index at which the kind was decided. For periodic
    runs ``entry_step`` is the first step whose word lies on the cycle, and
    ``period`` is the minimal cycle length. ``word`` is the word at ``steps``.
    """

    kind: OutcomeKind
    steps: int
    period: int | None = None
    entry_step: int | None = None
    max_length: int = 0
    word: Word = ()


def as_array(system: TagSystem, word: Iterable[int] | np.ndarray) -> np.ndarray:
    if isinstance(word, np.ndarray):
        arr = word.astype(system.dtype, copy=False)
    else:
        arr = np.fromiter(system.check_word(word), dtype=system.dtype)
    if arr.size and int(arr.max()) >= system.mu:
        raise ValueError(f"word uses symbols outside 0..{system.mu - 1}")
    return arr


class Tape:
    """Mutable trajectory state of one run, advanced in chunks by the compiled kernel.

    The buffer grows on demand, so a tape can be driven with an unbounded
    length limit (soak runs, benchmarks).
    """

    _EMPTY_TARGET = np.empty(0, dtype=np.uint8)

    def __init__(self, system: TagSystem, word, *, detect: bool = False, capacity: int | None = None,
                 start_step: int = 0):
        self.system = system
        self.detect = detect
        self.app, self.off, self.alen = system.tables
        start = as_array(system, word)
        cap = max(capacity or 0, 4 * (start.size + system.l_max + system.v), 1024)
        self.buf = np.empty(cap, dtype=system.dtype)
        self.saved = np.empty(cap, dtype=system.dtype)
        self.ist = np.zeros(K.N_ISTATE, dtype=np.int64)
        self.hst = np.zeros(K.N_HSTATE, dtype=np.uint64)
        K.init_state(self.buf, self.saved, self.ist, self.hst, start)
        # a resumed trajectory keeps absolute step numbers; ``advance`` limits refer to them
        self.ist[K.STEPS] = start_step
        self.ist[K.SCAN_BASE] = start_step
        self._empty = np.empty(0, dtype=system.dtype)

    @property
    def steps(self) -> int:
        return int(self.ist[K.STEPS])

    @property
    def length(self) -> int:
        return int(self.ist[K.LEN])

    @property
    def max_length_seen(self) -> int:
        return int(self.ist[K.MAXLEN])

    @property
    def period(self) -> int:
        return int(self.ist[K.LAM])

    def word_array(self) -> np.ndarray:
        head = int(self.ist[K.HEAD])
        return self.buf[head:head + self.length].copy()

    def word(self) -> Word:
        return tuple(int(s) for s in self.word_array())

    def word_hash(self) -> int:
        return int(K.word_hash(self.word_array()))

    def _grow(self) -> None:
        n = self.length
        head = int(self.ist[K.HEAD])
        cap = 2 * (self.buf.size + self.system.l_max)
        buf = np.empty(cap, dtype=self.buf.dtype)
        buf[:n] = self.buf[head:head + n]
        saved = np.empty(cap, dtype=self.buf.dtype)
        slen = int(self.ist[K.SAVED_LEN])
        saved[:slen] = self.saved[:slen]
        self.buf, self.saved = buf, saved
        self.ist[K.HEAD] = 0

    def advance(self, limit: int, max_length: int = UNBOUNDED, scan_out: np.ndarray | None = None,
                target: np.ndarray | None = None) -> int:
        """Advance to step ``limit`` at most; returns a kernel code (never FULL)."""
        out = self._empty if scan_out is None else scan_out
        seek = target is not None
        tgt = self._EMPTY_TARGET.astype(self.buf.dtype) if target is None else target.astype(self.buf.dtype)
        th = np.uint64(K.word_hash(tgt)) if seek else np.uint64(0)
        while True:
            code = K.advance(self.buf, self.saved, self.ist, self.hst, self.app, self.off, self.alen,
                             self.system.v, limit, max_length, self.detect, out, seek, tgt, th)
            if code != K.FULL:
                return code
            self._grow()

    def stream(self, n: int, max_length: int = UNBOUNDED) -> tuple[np.ndarray, int]:
        """Scanned symbols of the next ``n`` steps (fewer if the run ends); also the stop code."""
        out = np.empty(n, dtype=self.buf.dtype)
        self.ist[K.SCAN_BASE] = self.steps
        start = self.steps
        code = self.advance(start + n, max_length, out)
        return out[:self.steps - start], code


def step(system: TagSystem, word: Sequence[int]) -> Word | None:
    """One computation step; ``None`` signals a halt (word shorter than ``v``)."""
    word = tuple(word)
    if len(word) < system.v:
        return None
    return word[system.v:] + system.appendants[word[0]]


def trajectory(system: TagSystem, word: Sequence[int], n: int) -> list[Word]:
    """Plain-Python reference: the first ``n + 1`` words (shorter if it halts)."""
    words = [tuple(word)]
    for _ in range(n):
        nxt = step(system, words[-1])
        if nxt is None:
            break
        words.append(nxt)
    return words


def run(system: TagSystem, word, budget: RunBudget = RunBudget(), detect_cycles: bool = True) -> RunOutcome:
    start = as_array(system, word)
    tape = Tape(system, start, detect=detect_cycles,
                capacity=2 * (budget.max_length + system.l_max + system.v) if budget.max_length < 1 << 24 else None)
    code = tape.advance(budget.max_steps, budget.max_length)
    kind = _KIND_OF_CODE[code]
    period = entry = None
    if code == K.CYCLE:
        period = tape.period
        entry = find_entry(system, start, period, tape.max_length_seen)
    return RunOutcome(kind, tape.steps, period, entry, tape.max_length_seen, tape.word())


def find_entry(system: TagSystem, word, period: int, longest: int) -> int:
    app, off, alen = system.tables
    cap = 2 * (longest + system.l_max + system.v) + 16
    return int(K.find_entry(as_array(system, word), period, app, off, alen, system.v, cap))


@dataclass(frozen=True)
class ReachResult:
    """``found`` with ``step`` on success, else the run's terminal outcome.

    ``definitive_miss`` is set when the whole trajectory was examined: the run
    halted or closed into a cycle without producing the target.
    """

    found: bool
    step: int | None = None
    outcome: RunOutcome | None = None
    definitive_miss: bool = False


def reaches(system: TagSystem, word, target, budget: RunBudget = RunBudget()) -> ReachResult:
    tgt = as_array(system, target)
    tape = Tape(system, word, detect=True,
                capacity=2 * (budget.max_length + system.l_max + system.v) if budget.max_length < 1 << 24 else None)
    code = tape.advance(budget.max_steps, budget.max_length, target=tgt)
    if code == K.TARGET:
        return ReachResult(True, tape.steps)
    kind = _KIND_OF_CODE[code]
    period = entry = None
    if code == K.CYCLE:
        period = tape.period
        entry = find_entry(system, word, period, tape.max_length_seen)
    outcome = RunOutcome(kind, tape.steps, period, entry, tape.max_length_seen, tape.word())
    return ReachResult(False, outcome=outcome, definitive_miss=code in (K.CYCLE, K.HALTED))


def throughput_bench(system: TagSystem, word, steps: int) -> float:
    """Run exactly ``steps`` steps without cycle detection; returns steps per second."""
    Tape(system, word).advance(10)  # compile or load the kernel outside the timed region
    tape = Tape(system, word)
    t0 = time.perf_counter()
    code = tape.advance(steps)
    elapsed = time.perf_counter() - t0
    if code != K.LIMIT:
        raise EarlyTermination(tape.steps, _KIND_OF_CODE[code])
    return steps / elapsed if elapsed > 0 else float("inf")
