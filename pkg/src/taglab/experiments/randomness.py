"""A small randomness battery for binary streams, and stream extraction from tag systems.

Four tests, each at significance ``ALPHA``:

* monobit frequency: ``s = |sum(2x - 1)| / sqrt(n)``, ``p = erfc(s / sqrt(2))``
* Wald-Wolfowitz runs: normal approximation to the number of runs
* block frequency with 128-bit blocks: ``chi2 = 4M sum((pi_i - 1/2)^2)``
* serial test on overlapping 2-grams (cyclic), ``del psi^2 = psi^2_2 - psi^2_1``
  with 2 degrees of freedom
"""
from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, fields

import numpy as np
from scipy.special import gammaincc

from .. import _kernels as K
from ..core import RunBudget, Tape
from ..system import TagSystem

ALPHA = 0.01
MIN_BATTERY_BITS = 10_000
BLOCK = 128


class StreamTooShort(ValueError):
    pass


@dataclass(frozen=True)
class BatteryResult:
    name: str
    statistic: float
    p_value: float
    passed: bool


def _result(name: str, statistic: float, p: float, alpha: float) -> BatteryResult:
    return BatteryResult(name, float(statistic), float(p), bool(p >= alpha))


def monobit(bits: np.ndarray, alpha: float = ALPHA) -> BatteryResult:
    n = bits.size
    s = abs(2 * int(np.count_nonzero(bits)) - n) / math.sqrt(n)
    return _result("monobit", s, math.erfc(s / math.sqrt(2)), alpha)


def runs(bits: np.ndarray, alpha: float = ALPHA) -> BatteryResult:
    n = bits.size
    n1 = int(np.count_nonzero(bits))
    n0 = n - n1
    if n0 == 0 or n1 == 0:
        return _result("runs", math.inf, 0.0, alpha)
    r = 1 + int(np.count_nonzero(bits[1:] != bits[:-1]))
    mean = 2.0 * n0 * n1 / n + 1.0
    var = (mean - 1.0) * (mean - 2.0) / (n - 1)
    z = (r - mean) / math.sqrt(var)
    return _result("runs", z, math.erfc(abs(z) / math.sqrt(2)), alpha)


def block_frequency(bits: np.ndarray, block: int = BLOCK, alpha: float = ALPHA) -> BatteryResult:
    nblocks = bits.size // block
    props = bits[:nblocks * block].reshape(nblocks, block).mean(axis=1)
    chi2 = 4.0 * block * float(np.sum((props - 0.5) ** 2))
    return _result("block_frequency", chi2, gammaincc(nblocks / 2.0, chi2 / 2.0), alpha)


def _psi2(bits: np.ndarray, m: int) -> float:
    n = bits.size
    if m == 0:
        return 0.0
    ext = np.concatenate([bits, bits[:m - 1]]).astype(np.int64)
    idx = np.zeros(n, dtype=np.int64)
    for j in range(m):
        idx = idx * 2 + ext[j:j + n]
    counts = np.bincount(idx, minlength=1 << m).astype(np.float64)
    return float((1 << m) / n * np.sum(counts ** 2) - n)


def serial(bits: np.ndarray, alpha: float = ALPHA) -> BatteryResult:
    d = _psi2(bits, 2) - _psi2(bits, 1)
    return _result("serial", d, gammaincc(1.0, d / 2.0), alpha)


def battery(bits, alpha: float = ALPHA) -> list[BatteryResult]:
    bits = np.asarray(bits).astype(np.uint8, copy=False)
    if bits.size < MIN_BATTERY_BITS:
        raise StreamTooShort(f"need at least {MIN_BATTERY_BITS} bits, got {bits.size}")
    if bits.size and int(bits.max()) > 1:
        raise ValueError("battery expects a binary stream")
    return [monobit(bits, alpha), runs(bits, alpha), block_frequency(bits, alpha=alpha), serial(bits, alpha)]


def scanned_stream(system: TagSystem, word, n: int, budget: RunBudget = RunBudget()) -> np.ndarray:
    """Symbols scanned during the first ``n`` steps; shorter if the run halts or outgrows the bound."""
    stream, _ = Tape(system, word).stream(min(n, budget.max_steps), budget.max_length)
    return stream


def word_stream(system: TagSystem, word, n: int, budget: RunBudget = RunBudget()) -> np.ndarray:
    """Concatenation ``A_0 A_1 A_2 ...`` of successive words, cut at ``n`` symbols."""
    tape = Tape(system, word)
    parts, total = [], 0
    while total < n:
        w = tape.word_array()
        parts.append(w)
        total += w.size
        if tape.advance(tape.steps + 1, budget.max_length) != K.LIMIT or tape.steps >= budget.max_steps:
            break
    out = np.concatenate(parts) if parts else np.empty(0, dtype=system.dtype)
    return out[:n]


def exp4_randomness(system: TagSystem, word, budget: RunBudget = RunBudget(), stream_length: int = 1_000_000,
                    mode: str = "scanned", alpha: float = ALPHA) -> list[BatteryResult]:
    if system.mu != 2:
        raise ValueError("the battery needs a binary alphabet")
    if mode == "scanned":
        bits = scanned_stream(system, word, stream_length, budget)
    elif mode == "words":
        bits = word_stream(system, word, stream_length, budget)
    else:
        raise ValueError(f"mode must be 'scanned' or 'words', got {mode!r}")
    return battery(bits, alpha)


def write_randomness(path, results: list[BatteryResult], extra: dict | None = None) -> None:
    cols = list(extra or {}) + [f.name for f in fields(BatteryResult)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, cols, lineterminator="\n")
        w.writeheader()
        for r in results:
            w.writerow((extra or {}) | asdict(r))
