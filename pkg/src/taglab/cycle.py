"""Periodic orbits: detection, periodic structures and the four period types.

For a periodic orbit with period ``p``, each member ``S`` has a periodic
structure (the symbols at 1-based positions ``1, v+1, 2v+1, ...``) of length
``ceil(len(S) / v)``. The orbit's type compares ``p`` with those lengths:

======  ============================  =====================================
type    orbit-wide comparison         some member has max(p, l) % min(p, l) == 0
======  ============================  =====================================
Type1   p <= l for every member       yes
Type2   p <= l for every member       no
Type3   l < p for every member        yes
Type4   l < p for every member        no
======  ============================  =====================================

Types 1 and 3 are regular; types 2 and 4 are irregular. Orbits mixing both
comparisons are reported as unclassifiable rather than forced into a type.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .core import OutcomeKind, RunBudget, RunOutcome, Tape, as_array, run
from .system import POST, TagSystem, Word, format_word


class NoCycleWithinBudget(RuntimeError):
    def __init__(self, outcome: RunOutcome):
        super().__init__(f"no cycle detected: {outcome.kind.value} at step {outcome.steps}")
        self.outcome = outcome


class UnclassifiableOrbit(ValueError):
    """Some members have ``p <= l`` and others ``l < p``."""


class IrregularOrbit(ValueError):
    """A regular-type (1 or 3) orbit was required."""


class ConcatNotFound(RuntimeError):
    pass


class PeriodType(str, Enum):
    TYPE1 = "Type1"
    TYPE2 = "Type2"
    TYPE3 = "Type3"
    TYPE4 = "Type4"

    @property
    def regular(self) -> bool:
        return self in (PeriodType.TYPE1, PeriodType.TYPE3)


@dataclass(frozen=True)
class PeriodicStructure:
    symbols: Word

    @property
    def length(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class CycleInfo:
    entry_step: int
    period: int
    detected_at: int


@dataclass(frozen=True)
class PeriodicSet:
    """The ``period`` distinct words of an orbit, in trajectory order."""

    words: tuple[Word, ...]
    period: int
    v: int

    @property
    def structures(self) -> list[PeriodicStructure]:
        return [periodic_structure(w, self.v) for w in self.words]

    def structure_lengths(self) -> list[int]:
        return [-(-len(w) // self.v) for w in self.words]

    def to_record(self, mu: int, period_type: PeriodType | str | None = None) -> dict:
        kind = period_type.value if isinstance(period_type, PeriodType) else period_type
        return {
            "words": [format_word(w, mu) for w in self.words],
            "p": self.period,
            "structures": [format_word(s.symbols, mu) for s in self.structures],
            "type": kind,
        }


def periodic_structure(word: Sequence[int], v: int) -> PeriodicStructure:
    if len(word) == 0:
        raise ValueError("the empty word has no periodic structure")
    return PeriodicStructure(tuple(word[::v]))


def detect_cycle(system: TagSystem, word, budget: RunBudget = RunBudget()) -> CycleInfo:
    outcome = run(system, word, budget, detect_cycles=True)
    if outcome.kind is not OutcomeKind.PERIODIC:
        raise NoCycleWithinBudget(outcome)
    return CycleInfo(outcome.entry_step, outcome.period, outcome.steps)


def collect_orbit(system: TagSystem, word, period: int, skip: int = 0) -> PeriodicSet:
    """Words ``skip .. skip + period - 1`` of the trajectory from ``word``."""
    tape = Tape(system, word)
    tape.advance(skip)
    words = []
    for i in range(period):
        if i:
            tape.advance(skip + i)
        words.append(tape.word())
    return PeriodicSet(tuple(words), period, system.v)


def periodic_set(system: TagSystem, word, budget: RunBudget = RunBudget()) -> PeriodicSet:
    info = detect_cycle(system, word, budget)
    return collect_orbit(system, word, info.period, info.entry_step)


def classify_lengths(period: int, structure_lengths: Iterable[int]) -> PeriodType:
    lengths = list(structure_lengths)
    if not lengths:
        raise ValueError("empty orbit")
    at_most = [period <= n for n in lengths]
    divisible = any(max(period, n) % min(period, n) == 0 for n in lengths)
    if all(at_most):
        return PeriodType.TYPE1 if divisible else PeriodType.TYPE2
    if not any(at_most):
        return PeriodType.TYPE3 if divisible else PeriodType.TYPE4
    raise UnclassifiableOrbit(f"period {period} vs structure lengths {sorted(set(lengths))}")


def classify_period_type(orbit: PeriodicSet) -> PeriodType:
    return classify_lengths(orbit.period, orbit.structure_lengths())


def has_period(system: TagSystem, word, period: int) -> bool:
    """True iff ``period`` is the minimal ``q`` with ``step^q(word) == word``.

    Checks ``step^period(word) == word`` and rejects every proper divisor.
    """
    start = as_array(system, word)
    tape = Tape(system, start)
    for q in range(1, period + 1):
        if period % q:
            continue
        code = tape.advance(q)
        if code != K.LIMIT:
            return False
        if tape.length == start.size and np.array_equal(tape.word_array(), start):
            return q == period
    return False


def concat_periodic(first: PeriodicSet, second: PeriodicSet, system: TagSystem,
                    budget: RunBudget = RunBudget()) -> tuple[Word, int]:
    """Find members ``W1`` of ``first`` and ``W2`` of ``second`` whose concatenation is periodic.

    Pairs whose lengths are both multiples of ``v`` are tried first. Returns the
    concatenation and its measured period.
    """
    for orbit in (first, second):
        kind = classify_period_type(orbit)
        if not kind.regular:
            raise IrregularOrbit(f"orbit of period {orbit.period} is {kind.value}")
    v = system.v
    pairs = [(a, b) for a in first.words for b in second.words]
    pairs.sort(key=lambda ab: (len(ab[0]) % v != 0 or len(ab[1]) % v != 0))
    for a, b in pairs:
        candidate = a + b
        outcome = run(system, candidate, budget)
        if outcome.kind is OutcomeKind.PERIODIC and outcome.entry_step == 0:
            return candidate, outcome.period
    raise ConcatNotFound(f"no concatenation of members of orbits with periods {first.period}, {second.period} "
                         f"is periodic within {budget}")


def shearer_word(n: int) -> Word:
    """A word of Post's system with period ``2n``: ``(ab)^(n-2) b b a a`` with ``a = 00``, ``b = 1101``."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    a, b = (0, 0), (1, 1, 0, 1)
    if n == 1:
        return a + b
    return (a + b) * (n - 2) + b + b + a + a


def shearer_period(n: int) -> Word:
    word = shearer_word(n)
    if not has_period(POST, word, 2 * n):
        raise AssertionError(f"word for n={n} does not have minimal period {2 * n}")
    return word


@dataclass(frozen=True)
class HarvestedOrbit:
    start: Word
    period: int
    key: int


def harvest_orbits(system: TagSystem, words: Sequence[Sequence[int]],
                   budget: RunBudget = RunBudget(10**5, 15_000)) -> tuple[list[HarvestedOrbit], np.ndarray]:
    """Run many initial words in one compiled loop; distinct periodic orbits plus per-word codes.

    Orbits are told apart by period and the smallest member hash; one
    initial word reaching each orbit is kept.
    """
    app, off, alen = system.tables
    lens = np.array([len(w) for w in words], dtype=np.int64)
    offs = np.zeros(len(words), dtype=np.int64)
    if len(words) > 1:
        offs[1:] = np.cumsum(lens)[:-1]
    flat = np.fromiter((s for w in words for s in w), dtype=system.dtype, count=int(lens.sum()))
    codes = np.zeros(len(words), dtype=np.int64)
    steps = np.zeros(len(words), dtype=np.int64)
    periods = np.zeros(len(words), dtype=np.int64)
    keys = np.zeros(len(words), dtype=np.uint64)
    K.batch_cycles(flat, offs, lens, app, off, alen, system.v, system.l_max,
                   budget.max_steps, budget.max_length, codes, steps, periods, keys)
    seen: dict[tuple[int, int], HarvestedOrbit] = {}
    for i in np.flatnonzero(codes == K.CYCLE):
        k = (int(periods[i]), int(keys[i]))
        if k not in seen:
            seen[k] = HarvestedOrbit(tuple(int(s) for s in words[i]), k[0], k[1])
    return list(seen.values()), codes


def dump_orbits(path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=False) + "\n")


@dataclass
class SmallClassSearch:
    """Outcome of an exhaustive period-type search over a small class TS(2, v)."""

    systems_searched: int = 0
    systems_skipped: int = 0
    orbits: int = 0
    type_counts: dict[str, int] = field(default_factory=lambda: {t.value: 0 for t in PeriodType})
    unclassifiable: int = 0
    irregular: list[dict] = field(default_factory=list)


def _relabel(word: Word) -> Word:
    return tuple(1 - s for s in word)


def binary_words(max_length: int, min_length: int = 0) -> list[Word]:
    return [w for n in range(min_length, max_length + 1) for w in itertools.product((0, 1), repeat=n)]


def search_small_class(v: int = 2, max_appendant: int = 4, max_word: int = 12,
                       max_steps: int = 10**4) -> SmallClassSearch:
    """Classify every periodic orbit reached in TS(2, v) from words of length ``1..max_word``.

    All pairs of appendants of length ``0..max_appendant`` are considered, with
    two exact reductions. Swapping the symbols 0 and 1 maps a system onto
    another one with the same orbit types, so one system per swapped pair is
    run. Systems whose appendants are all longer than ``v`` grow at every
    step and cannot cycle; systems whose appendants are all shorter than
    ``v`` shrink at every step and halt. Both are skipped. The length bound
    is set so that only the step budget can stop a run.
    """
    appendants = binary_words(max_appendant)
    words = binary_words(max_word, 1)
    budget = RunBudget(max_steps, max_word + max_steps * max(max_appendant - v, 0) + 1)
    result = SmallClassSearch()
    for a, b in itertools.product(appendants, appendants):
        if (_relabel(b), _relabel(a)) < (a, b):
            continue
        if min(len(a), len(b)) > v or max(len(a), len(b)) < v:
            result.systems_skipped += 1
            continue
        system = TagSystem(2, v, (a, b))
        result.systems_searched += 1
        found, _ = harvest_orbits(system, words, budget)
        for orbit in found:
            outcome = run(system, orbit.start, budget)
            members = collect_orbit(system, orbit.start, outcome.period, outcome.entry_step)
            result.orbits += 1
            try:
                kind = classify_period_type(members)
            except UnclassifiableOrbit:
                result.unclassifiable += 1
                continue
            result.type_counts[kind.value] += 1
            if not kind.regular:
                result.irregular.append(members.to_record(2, kind) | {"system": system.to_text()})
    return result
