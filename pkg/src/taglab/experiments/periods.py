"""Period-type census over the periodic runs of a census."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..core import OutcomeKind
from ..cycle import PeriodType, UnclassifiableOrbit, classify_period_type, collect_orbit
from ..system import TagSystem
from .census import ExperimentRecord, record_word

UNCLASSIFIABLE = "Unclassifiable"
# orbit dumps above this many symbols keep lengths and structures only
MAX_DUMP_SYMBOLS = 2_000_000


@dataclass
class PeriodCensus:
    by_record: dict[str, int]
    by_orbit: dict[str, int]
    orbits: list[dict] = field(default_factory=list)


def _empty_histogram() -> dict[str, int]:
    return {t.value: 0 for t in PeriodType} | {UNCLASSIFIABLE: 0}


def exp2_period_census(records: Sequence[ExperimentRecord], system: TagSystem) -> PeriodCensus:
    """Classify the orbit of every periodic record.

    ``by_record`` counts initial words, ``by_orbit`` counts distinct orbits.
    The dump has one entry per distinct orbit, with members in trajectory
    order starting from the earliest member reached, and the indices of the
    words that reached it.
    """
    by_record = _empty_histogram()
    by_orbit = _empty_histogram()
    orbits: dict[frozenset, dict] = {}
    for rec in records:
        if rec.kind != OutcomeKind.PERIODIC.value:
            continue
        orbit = collect_orbit(system, record_word(system, rec), rec.period, rec.entry_step)
        try:
            kind = classify_period_type(orbit).value
        except UnclassifiableOrbit:
            kind = UNCLASSIFIABLE
        by_record[kind] += 1
        key = frozenset(orbit.words)
        if key in orbits:
            orbits[key]["word_indices"].append(rec.word_index)
            continue
        by_orbit[kind] += 1
        dump = orbit.to_record(system.mu, kind)
        if sum(len(w) for w in orbit.words) > MAX_DUMP_SYMBOLS:
            dump["words"] = None
        dump["lengths"] = [len(w) for w in orbit.words]
        dump["system_id"] = rec.system_id
        dump["word_indices"] = [rec.word_index]
        orbits[key] = dump
    return PeriodCensus(by_record, by_orbit, list(orbits.values()))

