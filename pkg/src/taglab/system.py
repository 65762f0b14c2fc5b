"""Tag systems, words, and their plain-text serialization.

A word is a tuple of symbol indices ``0..mu-1``. The text format used for
systems is::

    v=3
    0 -> 00
    1 -> 1101

Symbols are single digits while ``mu <= 10`` and comma-separated decimal
indices otherwise. An empty right-hand side denotes the empty word.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Word = tuple[int, ...]

EMPTY_WORDS = {"", "ε", "eps"}


class TagSystemError(ValueError):
    """Invalid tag-system definition or word."""


@dataclass(frozen=True)
class TagSystem:
    """A tag system with ``mu`` symbols, deletion number ``v`` and one appendant per symbol."""

    mu: int
    v: int
    appendants: tuple[Word, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "appendants", tuple(tuple(int(s) for s in w) for w in self.appendants))
        if self.mu < 1:
            raise TagSystemError(f"mu must be >= 1, got {self.mu}")
        if self.v < 1:
            raise TagSystemError(f"v must be >= 1, got {self.v}")
        if len(self.appendants) != self.mu:
            raise TagSystemError(f"expected {self.mu} appendants, got {len(self.appendants)}")
        for i, w in enumerate(self.appendants):
            bad = [s for s in w if not 0 <= s < self.mu]
            if bad:
                raise TagSystemError(f"appendant {i} uses symbols outside 0..{self.mu - 1}: {bad}")

    @classmethod
    def from_rules(cls, v: int, *rules: str | Sequence[int], name: str = "") -> "TagSystem":
        """``TagSystem.from_rules(3, "00", "1101")`` for small alphabets."""
        mu = len(rules)
        return cls(mu, v, tuple(parse_word(r, mu) if isinstance(r, str) else tuple(r) for r in rules), name)

    @property
    def l_max(self) -> int:
        return max(len(w) for w in self.appendants)

    @property
    def l_min(self) -> int:
        return min(len(w) for w in self.appendants)

    def check_word(self, word: Iterable[int]) -> Word:
        w = tuple(int(s) for s in word)
        bad = [s for s in w if not 0 <= s < self.mu]
        if bad:
            raise TagSystemError(f"word uses symbols outside 0..{self.mu - 1}: {bad[:5]}")
        return w

    # flat arrays consumed by the compiled kernels
    @cached_property
    def dtype(self) -> type:
        return np.uint8 if self.mu <= 256 else np.uint16

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        lens = np.array([len(w) for w in self.appendants], dtype=np.int64)
        offs = np.zeros(self.mu, dtype=np.int64)
        offs[1:] = np.cumsum(lens)[:-1]
        flat = np.array([s for w in self.appendants for s in w] or [0], dtype=self.dtype)
        return flat, offs, lens

    def to_text(self) -> str:
        lines = [f"v={self.v}"]
        for i, w in enumerate(self.appendants):
            rhs = format_word(w, self.mu)
            lines.append(f"{i} -> {rhs}" if rhs else f"{i} ->")
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        rules = ", ".join(f"{i}->{format_word(w, self.mu) or 'ε'}" for i, w in enumerate(self.appendants))
        return f"TS({self.mu},{self.v}) [{rules}]"


_POWER = re.compile(r"\(([^()]*)\)\^(\d+)")


def _expand_powers(text: str) -> str:
    """Rewrite ``(xyz)^n`` groups as ``n`` copies of ``xyz``."""
    def repeat(m: re.Match) -> str:
        sep = "," if "," in text else ""
        return sep.join([m.group(1)] * int(m.group(2)))

    return _POWER.sub(repeat, text)


def parse_word(text: str, mu: int) -> Word:
    """Digits (``001101``), comma-separated symbols, or groups such as ``(100)^110``."""
    text = _expand_powers(text.strip())
    if text in EMPTY_WORDS:
        return ()
    if mu <= 10 and "," not in text:
        try:
            word = tuple(int(c) for c in text)
        except ValueError:
            raise TagSystemError(f"bad word {text!r}") from None
    else:
        try:
            word = tuple(int(c) for c in text.split(","))
        except ValueError:
            raise TagSystemError(f"bad word {text!r}") from None
    if any(not 0 <= s < mu for s in word):
        raise TagSystemError(f"word {text!r} uses symbols outside 0..{mu - 1}")
    return word


def format_word(word: Iterable[int], mu: int) -> str:
    if mu <= 10:
        return "".join(str(s) for s in word)
    return ",".join(str(s) for s in word)


def parse_system(text: str, name: str = "") -> TagSystem:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].replace(" ", "").startswith("v="):
        raise TagSystemError("first line must be 'v=<int>'")
    try:
        v = int(lines[0].replace(" ", "")[2:])
    except ValueError:
        raise TagSystemError(f"bad deletion number line {lines[0]!r}") from None
    rules = lines[1:]
    mu = len(rules)
    if mu == 0:
        raise TagSystemError("no appendant lines")
    appendants = []
    for i, line in enumerate(rules):
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise TagSystemError(f"missing '->' in {line!r}")
        if lhs.strip() != str(i):
            raise TagSystemError(f"rules must be listed in index order; expected {i}, got {lhs.strip()!r}")
        appendants.append(parse_word(rhs, mu))
    return TagSystem(mu, v, tuple(appendants), name)


POST = TagSystem.from_rules(3, "00", "1101", name="post-00-1101")
FIG1_RIGHT = TagSystem.from_rules(5, "1011", "010100", name="fig1-right")
COLLATZ = TagSystem.from_rules(2, "12", "0", "000", name="collatz")

PRESETS: dict[str, TagSystem] = {t.name: t for t in (POST, FIG1_RIGHT, COLLATZ)}


def load_system(preset: str | None = None, path: str | None = None) -> TagSystem:
    if preset is not None:
        try:
            return PRESETS[preset]
        except KeyError:
            raise TagSystemError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}") from None
    if path is None:
        raise TagSystemError("either a preset or a system file is required")
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read(), name=path)
