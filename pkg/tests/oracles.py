"""Slow, obviously-correct reference implementations used as test oracles.

Nothing here imports the package's simulation code: systems are passed as a
deletion number and a list of appendants, words as tuples.
"""
from __future__ import annotations

import math
from collections import deque


def deque_trajectory(v: int, appendants, word, n: int) -> list[tuple]:
    """Words A_0 .. A_n with a deque tape (stops early on a halt)."""
    tape = deque(word)
    out = [tuple(tape)]
    for _ in range(n):
        if len(tape) < v:
            break
        a = tape[0]
        for _ in range(v):
            tape.popleft()
        tape.extend(appendants[a])
        out.append(tuple(tape))
    return out


def naive_outcome(v: int, appendants, word, max_steps: int, max_length: int):
    """(kind, decided_at, period, entry) by remembering every word seen.

    Kinds: Halted, Periodic, LengthBoundExceeded, BudgetExhausted. For a
    periodic run ``decided_at`` is the first repetition ``entry + period``.
    """
    seen: dict[tuple, int] = {}
    tape = deque(word)
    i = 0
    while True:
        w = tuple(tape)
        if len(w) > max_length:
            return "LengthBoundExceeded", i, None, None
        if len(w) < v:
            return "Halted", i, None, None
        if w in seen:
            return "Periodic", i, i - seen[w], seen[w]
        seen[w] = i
        if i >= max_steps:
            return "BudgetExhausted", i, None, None
        a = tape[0]
        for _ in range(v):
            tape.popleft()
        tape.extend(appendants[a])
        i += 1


def naive_orbit(v: int, appendants, word, max_steps: int = 10**5) -> tuple[int, list[tuple]]:
    kind, _, period, entry = naive_outcome(v, appendants, word, max_steps, 10**9)
    assert kind == "Periodic", kind
    traj = deque_trajectory(v, appendants, word, entry + period)
    return period, traj[entry:entry + period]


def table1_type(period: int, words, v: int) -> str | None:
    """Read the type off the two rows of the period-type table; None when no column fits."""
    mins, divisible = [], False
    for w in words:
        l_s = 0
        for pos in range(len(w)):
            if pos % v == 0:
                l_s += 1
        lo, hi = min(period, l_s), max(period, l_s)
        mins.append("p" if lo == period else "l")
        if hi % lo == 0:
            divisible = True
    # row 2: type 1/2 have min = p for every word, type 3/4 have l strictly below p for every word
    if all(m == "p" for m in mins):
        return "Type1" if divisible else "Type2"
    if all(m == "l" for m in mins):
        return "Type3" if divisible else "Type4"
    return None


def collatz_shortcut_orbit(n: int) -> list[int]:
    out = [n]
    while out[-1] != 1:
        m = out[-1]
        out.append(m // 2 if m % 2 == 0 else (3 * m + 1) // 2)
    return out


def collatz_tag_phases(n: int) -> list[int]:
    """Lengths of the pure 0-powers met by ``0 -> 12, 1 -> 0, 2 -> 000`` from ``0^n``, stepping one symbol at a time."""
    apps = {0: (1, 2), 1: (0,), 2: (0, 0, 0)}
    tape = deque([0] * n)
    phases = [n]
    while len(tape) >= 2:
        a = tape.popleft()
        tape.popleft()
        tape.extend(apps[a])
        if all(s == 0 for s in tape):
            phases.append(len(tape))
    return phases


def normal_two_sided_p(z: float) -> float:
    return math.erfc(abs(z) / math.sqrt(2))
