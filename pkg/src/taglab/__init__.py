"""Tag systems: fast exact simulation, periodic orbits, the Collatz reduction and desk-scale experiments."""
from __future__ import annotations

from .core import EarlyTermination, OutcomeKind, RunBudget, RunOutcome, Tape, reaches, run, step, trajectory
from .system import COLLATZ, FIG1_RIGHT, POST, PRESETS, TagSystem, TagSystemError, format_word, load_system, parse_word

__version__ = "0.1.0"

__all__ = [
    "COLLATZ", "FIG1_RIGHT", "POST", "PRESETS", "EarlyTermination", "OutcomeKind", "RunBudget", "RunOutcome",
    "TagSystem", "TagSystemError", "Tape", "format_word", "load_system", "parse_word", "reaches", "run", "step",
    "trajectory",
]
