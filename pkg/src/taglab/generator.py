"""Random generation and screening of TS(mu, v) candidates.

Pipeline per sampled system: known decidability criteria, then the
appendant balance filter, then pilot runs on random initial words. Each
candidate draws from its own PCG64 stream seeded by ``(seed, index)`` so the
output does not depend on evaluation order.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .core import OutcomeKind, RunBudget, run
from .system import TagSystem

PRNG = "PCG64"


class Reason(str, Enum):
    V1 = "V1"
    LMIN_GE_V = "LminGeV"
    LMAX_LE_V = "LmaxLeV"
    MU1 = "Mu1"
    TS22 = "TS22"


class ScreenOutcome(str, Enum):
    SELECTED = "SelectedCandidate"
    REJECTED_DECIDABLE = "RejectedDecidable"
    REJECTED_BALANCE = "RejectedBalance"
    REJECTED_PILOT = "RejectedByPilotRuns"
    REJECTED_GROWTH = "RejectedGrowth"


@dataclass(frozen=True)
class ClassSpec:
    mu: int = 2
    v_min: int = 3
    v_max: int = 15
    excess_max: int = 4

    def __post_init__(self) -> None:
        if self.mu < 1 or self.v_min < 1 or self.v_min > self.v_max or self.excess_max < 1:
            raise ValueError(f"invalid class spec {self}")


@dataclass
class ScreenReport:
    decidable_reason: Reason | None
    balance: int
    screen_outcome: ScreenOutcome
    pilot_kinds: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        d["decidable_reason"] = self.decidable_reason.value if self.decidable_reason else None
        d["screen_outcome"] = self.screen_outcome.value
        return d


@dataclass
class Candidate:
    index: int
    system: TagSystem
    report: ScreenReport

    @property
    def selected(self) -> bool:
        return self.report.screen_outcome is ScreenOutcome.SELECTED


def decidability_screen(system: TagSystem) -> Reason | None:
    """First applicable solvability criterion, in a fixed order, or None."""
    if system.v == 1:
        return Reason.V1
    if system.l_min >= system.v:
        return Reason.LMIN_GE_V
    if system.l_max <= system.v:
        return Reason.LMAX_LE_V
    if system.mu == 1:
        return Reason.MU1
    if system.mu == 2 and system.v == 2:
        return Reason.TS22
    return None


def balance(system: TagSystem) -> int:
    """Sum over symbols of (occurrences across all appendants) * (own appendant length - v)."""
    counts = np.bincount([s for w in system.appendants for s in w], minlength=system.mu)
    return int(sum(int(c) * (len(w) - system.v) for c, w in zip(counts, system.appendants)))


def candidate_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def sample_system(spec: ClassSpec, rng: np.random.Generator) -> TagSystem:
    v = int(rng.integers(spec.v_min, spec.v_max + 1))
    lo, hi = max(0, v - spec.excess_max), v + spec.excess_max
    while True:
        lengths = rng.integers(lo, hi + 1, size=spec.mu)
        # both excesses must be at least 1; impossible with a single symbol
        if spec.mu == 1 or (lengths.max() - v >= 1 and v - lengths.min() >= 1):
            break
    appendants = tuple(tuple(int(s) for s in rng.integers(0, spec.mu, size=int(n))) for n in lengths)
    return TagSystem(spec.mu, v, appendants)


def pilot_runs(system: TagSystem, rng: np.random.Generator, n_words: int = 20, word_length: int = 300,
               budget: RunBudget = RunBudget(), survive: str = "all") -> tuple[ScreenOutcome, list[str]]:
    """Survival screen on random initial words.

    ``survive="all"``: every word must still be running at the step budget.
    ``survive="any"``: one surviving word suffices. A word exceeding the length
    bound excludes the system in both modes.
    """
    if survive not in ("all", "any"):
        raise ValueError(f"survive must be 'all' or 'any', got {survive!r}")
    kinds: list[str] = []
    for _ in range(n_words):
        word = rng.integers(0, system.mu, size=word_length)
        kind = run(system, word, budget).kind
        kinds.append(kind.value)
        if kind is OutcomeKind.LENGTH_BOUND_EXCEEDED:
            return ScreenOutcome.REJECTED_GROWTH, kinds
        if survive == "all" and kind is not OutcomeKind.BUDGET_EXHAUSTED:
            return ScreenOutcome.REJECTED_PILOT, kinds
    if OutcomeKind.BUDGET_EXHAUSTED.value in kinds:
        return ScreenOutcome.SELECTED, kinds
    return ScreenOutcome.REJECTED_PILOT, kinds


def screen(system: TagSystem, rng: np.random.Generator | None = None, balance_mode: str = "eq0",
           survive: str = "all", pilot_words: int = 20, pilot_length: int = 300,
           budget: RunBudget = RunBudget()) -> ScreenReport:
    if balance_mode not in ("eq0", "le0"):
        raise ValueError(f"balance mode must be 'eq0' or 'le0', got {balance_mode!r}")
    reason = decidability_screen(system)
    bal = balance(system)
    if reason is not None:
        return ScreenReport(reason, bal, ScreenOutcome.REJECTED_DECIDABLE)
    unbalanced = bal != 0 if balance_mode == "eq0" else bal > 0
    if unbalanced:
        return ScreenReport(None, bal, ScreenOutcome.REJECTED_BALANCE)
    if rng is None:
        rng = candidate_rng(0, 0)
    outcome, kinds = pilot_runs(system, rng, pilot_words, pilot_length, budget, survive)
    return ScreenReport(None, bal, outcome, kinds)


def generate_candidates(spec: ClassSpec, seed: int, count: int, balance_mode: str = "eq0",
                        survive: str = "all", pilot_words: int = 20, pilot_length: int = 300,
                        budget: RunBudget = RunBudget()) -> list[Candidate]:
    """Sample ``count`` systems and screen each; the selected ones have ``Candidate.selected``."""
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    out = []
    for i in range(count):
        rng = candidate_rng(seed, i)
        system = sample_system(spec, rng)
        report = screen(system, rng, balance_mode, survive, pilot_words, pilot_length, budget)
        out.append(Candidate(i, system, report))
    return out
