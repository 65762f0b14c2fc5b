"""Long single-trajectory runs with resumable checkpoints.

A checkpoint holds the current word, the absolute step counter, the rolling
hash of the word, the longest length seen so far and the hash of the initial
word. It is written to a temporary file and moved into place with
``os.replace``, so a killed process leaves either the previous or the new
checkpoint, never a torn one.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels as K
from .core import _KIND_OF_CODE, Tape, as_array
from .system import TagSystem

CHECKPOINT_NAME = "soak_checkpoint.npz"
LOG_NAME = "soak.jsonl"
DEFAULT_INTERVAL = 10**9


class CheckpointMismatch(ValueError):
    """The checkpoint on disk belongs to a different system or initial word."""


@dataclass(frozen=True)
class Checkpoint:
    step: int
    word: np.ndarray
    word_hash: int
    max_length: int
    system_text: str
    start_hash: int


@dataclass(frozen=True)
class SoakResult:
    step: int
    length: int
    word_hash: int
    max_length: int
    kind: str | None
    checkpoints_written: int
    resumed_from: int | None


def save_checkpoint(path: str | os.PathLike, cp: Checkpoint) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        np.savez(fh, step=np.int64(cp.step), word=cp.word, word_hash=np.uint64(cp.word_hash),
                 max_length=np.int64(cp.max_length), system_text=np.array(cp.system_text),
                 start_hash=np.uint64(cp.start_hash))
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def load_checkpoint(path: str | os.PathLike) -> Checkpoint:
    with np.load(path) as z:
        word = z["word"].copy()
        cp = Checkpoint(int(z["step"]), word, int(z["word_hash"]), int(z["max_length"]), str(z["system_text"]),
                        int(z["start_hash"]))
    if int(K.word_hash(cp.word)) != cp.word_hash:
        raise CheckpointMismatch(f"{path}: stored word does not match its hash")
    return cp


def soak(system: TagSystem, word, out_dir: str | os.PathLike, interval: int = DEFAULT_INTERVAL,
         checkpoints: int | None = None, resume: bool = True) -> SoakResult:
    """Run ``word`` under ``system`` with a checkpoint every ``interval`` steps.

    Checkpoints fall on absolute steps that are multiples of ``interval``.
    With ``checkpoints=K`` the run stops at step ``K * interval``; without it
    the run continues until the word halts. An existing checkpoint in
    ``out_dir`` is resumed when ``resume`` is set.
    """
    if interval < 1:
        raise ValueError(f"interval must be positive, got {interval}")
    if checkpoints is not None and checkpoints < 1:
        raise ValueError(f"checkpoints must be positive, got {checkpoints}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cp_path = out / CHECKPOINT_NAME
    start = as_array(system, word)
    start_hash = int(K.word_hash(start))
    text = system.to_text()

    resumed_from = None
    step, current, max_len = 0, start, start.size
    if resume and cp_path.exists():
        cp = load_checkpoint(cp_path)
        if cp.system_text != text or cp.start_hash != start_hash:
            raise CheckpointMismatch(f"{cp_path} was written for a different system or initial word")
        step, current, max_len = cp.step, cp.word.astype(system.dtype), cp.max_length
        resumed_from = step

    stop = None if checkpoints is None else checkpoints * interval
    tape = Tape(system, current, start_step=step)
    written = 0
    kind = None
    with open(out / LOG_NAME, "a", encoding="utf-8") as log:
        while stop is None or tape.steps < stop:
            target = (tape.steps // interval + 1) * interval
            code = tape.advance(target)
            max_len = max(max_len, tape.max_length_seen)
            if code != K.LIMIT:
                kind = _KIND_OF_CODE[code].value
                break
            h = tape.word_hash()
            save_checkpoint(cp_path, Checkpoint(tape.steps, tape.word_array(), h, max_len, text, start_hash))
            written += 1
            log.write(json.dumps({"step": tape.steps, "length": tape.length, "max_length": max_len,
                                  "word_hash": f"{h:016x}"}) + "\n")
            log.flush()
    return SoakResult(tape.steps, tape.length, tape.word_hash(), max_len, kind, written, resumed_from)
