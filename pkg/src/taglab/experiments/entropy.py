"""Order-k Markov entropy rate of a symbol stream."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ..core import RunBudget
from ..system import TagSystem
from .randomness import StreamTooShort, scanned_stream, word_stream


@dataclass
class EntropyReport:
    order: int
    mu: int
    # context (as a tuple of symbols) -> conditional distribution of the next symbol
    table: dict[tuple[int, ...], list[float]]
    rate: float


def _context_index(stream: np.ndarray, mu: int, k: int) -> np.ndarray:
    n = stream.size - k
    idx = np.zeros(n, dtype=np.int64)
    for j in range(k):
        idx = idx * mu + stream[j:j + n]
    return idx


def _decode(index: int, mu: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        index, s = divmod(index, mu)
        out.append(s)
    return tuple(reversed(out))


def entropy_rate(stream, mu: int, k: int = 1, smoothing: float = 0.0) -> EntropyReport:
    """``H = sum_c P(c) H(next | c)`` in bits per symbol over length-``k`` contexts.

    ``smoothing`` is a pseudocount added to every (context, symbol) cell of
    the contexts that occur; 0 gives the plug-in estimate.
    """
    stream = np.asarray(stream).astype(np.int64)
    need = 100 * mu ** (k + 1)
    if stream.size < need:
        raise StreamTooShort(f"order {k} over {mu} symbols needs {need} symbols, got {stream.size}")
    ctx = _context_index(stream, mu, k)
    nxt = stream[k:]
    counts = np.bincount(ctx * mu + nxt, minlength=mu ** (k + 1)).reshape(mu ** k, mu).astype(np.float64)
    totals = counts.sum(axis=1)
    seen = totals > 0
    probs = (counts[seen] + smoothing) / (totals[seen] + smoothing * mu)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(probs > 0, -probs * np.log2(probs), 0.0)
    cond = terms.sum(axis=1)
    weights = totals[seen] / totals.sum()
    rate = float(np.dot(weights, cond)) + 0.0
    table = {_decode(int(c), mu, k): p.tolist() for c, p in zip(np.flatnonzero(seen), probs)}
    return EntropyReport(k, mu, table, max(rate, 0.0))


def exp5_entropy(system: TagSystem, word, budget: RunBudget = RunBudget(), stream_length: int = 1_000_000,
                 k: int = 1, smoothing: float = 0.0, mode: str = "scanned") -> EntropyReport:
    if mode == "scanned":
        stream = scanned_stream(system, word, stream_length, budget)
    elif mode == "words":
        stream = word_stream(system, word, stream_length, budget)
    else:
        raise ValueError(f"mode must be 'scanned' or 'words', got {mode!r}")
    return entropy_rate(stream, system.mu, k, smoothing)


def write_entropy(path, reports: list[EntropyReport], extra: dict | None = None) -> None:
    extra = extra or {}
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(extra) + ["order", "context", "next_symbol_probs", "entropy_rate"])
        for rep in reports:
            for ctx, probs in rep.table.items():
                w.writerow(list(extra.values()) + [rep.order, "".join(map(str, ctx)) if rep.mu <= 10 else
                                                   ",".join(map(str, ctx)), " ".join(f"{p:.6f}" for p in probs),
                                                   f"{rep.rate:.6f}"])
