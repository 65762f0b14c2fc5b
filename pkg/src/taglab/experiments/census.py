"""Outcome census over random initial words and the survival curve."""
from __future__ import annotations

import csv
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from functools import partial
from typing import Sequence

import numpy as np

from ..core import OutcomeKind, RunBudget, run
from ..system import TagSystem, format_word, parse_word

N_THRESHOLDS = 64


@dataclass(frozen=True)
class ExperimentRecord:
    system_id: str
    word_index: int
    initial_word: str
    kind: str
    steps: int
    period: int | None
    entry_step: int | None
    max_length: int

    @property
    def resolved_at(self) -> int | None:
        """Step at which the outcome became observable; None if still running at the budget.

        For periodic runs this is the first repetition, ``entry_step + period``,
        not the (later) step at which the detector confirmed it.
        """
        if self.kind == OutcomeKind.BUDGET_EXHAUSTED.value:
            return None
        if self.kind == OutcomeKind.PERIODIC.value:
            return self.entry_step + self.period
        return self.steps


@dataclass
class CensusResult:
    records: list[ExperimentRecord]
    survival: list[tuple[int, int]]
    histogram: dict[str, int]


def random_word(mu: int, length: int, seed: int, index: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))
    return rng.integers(0, mu, size=length)


def _census_one(system: TagSystem, word_length: int, budget: RunBudget, seed: int, system_id: str,
                index: int) -> ExperimentRecord:
    word = random_word(system.mu, word_length, seed, index)
    out = run(system, word, budget)
    return ExperimentRecord(system_id, index, format_word(word.tolist(), system.mu), out.kind.value,
                            out.steps, out.period, out.entry_step, out.max_length)


def threshold_grid(max_steps: int, n: int = N_THRESHOLDS) -> np.ndarray:
    """``n`` log-spaced integer thresholds from 1 to ``max_steps``.

    Rounding collides near 1, so each point is bumped to at least one past its
    predecessor; with ``max_steps < n`` the grid is simply ``1..max_steps``.
    """
    if max_steps <= n:
        return np.arange(1, max_steps + 1, dtype=np.int64)
    grid = np.rint(np.logspace(0, np.log10(max_steps), n)).astype(np.int64)
    for i in range(1, n):
        grid[i] = max(grid[i], grid[i - 1] + 1)
    return grid


def survival_curve(records: Sequence[ExperimentRecord], max_steps: int) -> list[tuple[int, int]]:
    """Unresolved count at each threshold; words exceeding the length bound count as resolved."""
    resolved = np.array(sorted(r.resolved_at for r in records if r.resolved_at is not None), dtype=np.int64)
    total = len(records)
    return [(int(t), int(total - np.searchsorted(resolved, t, side="right"))) for t in threshold_grid(max_steps)]


def histogram(records: Sequence[ExperimentRecord]) -> dict[str, int]:
    counts = Counter(r.kind for r in records)
    return {k.value: counts.get(k.value, 0) for k in OutcomeKind}


def exp1_census(system: TagSystem, n_words: int = 1998, word_length: int = 300,
                budget: RunBudget = RunBudget(), seed: int = 0, system_id: str | None = None,
                workers: int = 1) -> CensusResult:
    if n_words < 1:
        raise ValueError(f"n_words must be positive, got {n_words}")
    sid = system_id if system_id is not None else (system.name or str(system))
    job = partial(_census_one, system, word_length, budget, seed, sid)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            records = list(pool.map(job, range(n_words), chunksize=8))
    else:
        records = [job(i) for i in range(n_words)]
    return CensusResult(records, survival_curve(records, budget.max_steps), histogram(records))


def decile_fractions(records: Sequence[ExperimentRecord], max_steps: int) -> tuple[float, float]:
    """Fractions of resolutions falling in the first and in the last tenth of the step budget."""
    times = [r.resolved_at for r in records if r.resolved_at is not None]
    if not times:
        return 0.0, 0.0
    first = sum(t <= max_steps / 10 for t in times)
    last = sum(t > max_steps * 9 / 10 for t in times)
    return first / len(times), last / len(times)


CENSUS_COLUMNS = [f.name for f in fields(ExperimentRecord)]


def write_census(path, records: Sequence[ExperimentRecord]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, CENSUS_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow(asdict(r))


def read_census(path) -> list[ExperimentRecord]:
    def opt(x: str) -> int | None:
        return int(x) if x != "" else None

    with open(path, newline="", encoding="utf-8") as fh:
        return [ExperimentRecord(row["system_id"], int(row["word_index"]), row["initial_word"], row["kind"],
                                 int(row["steps"]), opt(row["period"]), opt(row["entry_step"]),
                                 int(row["max_length"]))
                for row in csv.DictReader(fh)]


def write_survival(path, curve: Sequence[tuple[int, int]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step_threshold", "unresolved_count"])
        w.writerows(curve)


def record_word(system: TagSystem, record: ExperimentRecord) -> tuple[int, ...]:
    return parse_word(record.initial_word, system.mu)
