"""Sensitivity of the outcome to single-symbol changes of the initial word."""
from __future__ import annotations

import csv
from dataclasses import asdict, dataclass, fields
from typing import Sequence

import numpy as np

from .. import _kernels as K
from ..core import _KIND_OF_CODE, RunBudget, Tape, as_array
from ..system import TagSystem


@dataclass(frozen=True)
class Divergence:
    position: int
    symbol: int
    base_kind: str
    variant_kind: str
    same_class: bool
    delta_steps: int
    length_divergence_step: int | None


@dataclass
class SensitivityResult:
    score: float
    rows: list[Divergence]


def _traced_run(system: TagSystem, word: np.ndarray, budget: RunBudget) -> tuple[str, int, np.ndarray]:
    tape = Tape(system, word, detect=True, capacity=2 * (budget.max_length + system.l_max + system.v))
    scans = np.empty(budget.max_steps, dtype=system.dtype)
    code = tape.advance(budget.max_steps, budget.max_length, scans)
    return _KIND_OF_CODE[code].value, tape.steps, scans[:tape.steps]


def exp3_sensitivity(system: TagSystem, base_word: Sequence[int], budget: RunBudget = RunBudget()) -> SensitivityResult:
    """Rerun every single-position substitution of ``base_word``.

    The score is the fraction of substitutions whose outcome kind differs
    from the base run. ``length_divergence_step`` is the first step at which
    the two word lengths differ, looking only at steps both runs executed.
    """
    base = as_array(system, base_word)
    if base.size < 1:
        raise ValueError("base word must be non-empty")
    delta = np.array([len(w) - system.v for w in system.appendants], dtype=np.int64)
    base_kind, base_steps, base_scans = _traced_run(system, base, budget)
    rows = []
    for pos in range(base.size):
        for sym in range(system.mu):
            if sym == base[pos]:
                continue
            variant = base.copy()
            variant[pos] = sym
            kind, steps, scans = _traced_run(system, variant, budget)
            div = int(K.first_length_divergence(base_scans, scans, delta))
            rows.append(Divergence(pos, sym, base_kind, kind, kind == base_kind, abs(steps - base_steps),
                                   div if div >= 0 else None))
    score = sum(not r.same_class for r in rows) / len(rows) if rows else 0.0
    return SensitivityResult(score, rows)


def write_sensitivity(path, result: SensitivityResult) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, [f.name for f in fields(Divergence)], lineterminator="\n")
        w.writeheader()
        for r in result.rows:
            w.writerow(asdict(r))
