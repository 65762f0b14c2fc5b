"""Desk-scale reproductions of the census, period, sensitivity, randomness and entropy experiments."""
from .census import (CensusResult, ExperimentRecord, decile_fractions, exp1_census, histogram, random_word,
                     read_census, survival_curve, write_census, write_survival)
from .entropy import EntropyReport, entropy_rate, exp5_entropy, write_entropy
from .periods import UNCLASSIFIABLE, PeriodCensus, exp2_period_census
from .randomness import (BatteryResult, StreamTooShort, battery, exp4_randomness, scanned_stream, word_stream,
                         write_randomness)
from .sensitivity import SensitivityResult, exp3_sensitivity, write_sensitivity

__all__ = [
    "UNCLASSIFIABLE", "BatteryResult", "CensusResult", "EntropyReport", "ExperimentRecord", "PeriodCensus",
    "SensitivityResult", "StreamTooShort", "battery", "decile_fractions", "entropy_rate", "exp1_census",
    "exp2_period_census", "exp3_sensitivity", "exp4_randomness", "exp5_entropy", "histogram", "random_word",
    "read_census", "scanned_stream", "survival_curve", "word_stream", "write_census", "write_entropy",
    "write_randomness", "write_sensitivity", "write_survival",
]
