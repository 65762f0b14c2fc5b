"""Command-line entry point: ``taglab <command> [options]``.

Every command echoes its effective configuration to ``config.json`` in the
output directory. The default output directory comes from the
``TAGLAB_OUTPUT_DIR`` environment variable, falling back to ``taglab-out``.

Exit codes: 0 success, 2 configuration error, 3 oracle mismatch, 4 a run
ran out of budget where a result was required. Failures are also reported
on stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .collatz import OracleMismatch, SweepSummary, iter_collatz, summarize
from .core import EarlyTermination, RunBudget, reaches, run, throughput_bench
from .cycle import NoCycleWithinBudget, UnclassifiableOrbit, classify_period_type, dump_orbits, periodic_set
from .experiments import (
    UNCLASSIFIABLE,
    StreamTooShort,
    decile_fractions,
    exp1_census,
    exp2_period_census,
    exp3_sensitivity,
    exp4_randomness,
    exp5_entropy,
    random_word,
    read_census,
    scanned_stream,
    word_stream,
    write_census,
    write_entropy,
    write_randomness,
    write_sensitivity,
    write_survival,
)
from .generator import PRNG, ClassSpec, candidate_rng, generate_candidates, screen
from .soak import DEFAULT_INTERVAL, CheckpointMismatch, soak
from .system import POST, TagSystem, TagSystemError, format_word, load_system, parse_word

OUTPUT_ENV = "TAGLAB_OUTPUT_DIR"
DEFAULT_OUTPUT = "taglab-out"
SOAK_WORD = "(100)^110"

EXIT_OK, EXIT_CONFIG, EXIT_ORACLE, EXIT_BUDGET = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str, **details):
        super().__init__(message)
        self.code = code
        self.details = details


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise CliError(EXIT_CONFIG, message)


# ---------------------------------------------------------------- helpers

def _system(args) -> TagSystem:
    if args.preset is None and args.system is None:
        return POST
    return load_system(args.preset, args.system)


def _budget(args) -> RunBudget:
    return RunBudget(args.max_steps, args.max_length)


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _initial_word(args, system: TagSystem):
    """The ``--word`` argument, or a seeded random word of ``--length`` symbols."""
    if args.word is not None:
        return parse_word(args.word, system.mu)
    return tuple(int(s) for s in random_word(system.mu, args.length, args.seed, args.word_index))


def _write_config(out: Path, args, system: TagSystem | None, extra: dict | None = None) -> None:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "no_timestamp")}
    if system is not None:
        cfg["system_text"] = system.to_text()
        cfg["system_name"] = system.name
    cfg["output_dir"] = str(out)
    cfg["taglab_version"] = __version__
    cfg |= extra or {}
    if not args.no_timestamp:
        cfg = {"generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds")} | cfg
    with open(out / "config.json", "w", encoding="utf-8") as fh:
        json.dump(cfg, fh, indent=2)
        fh.write("\n")


def _emit(obj) -> None:
    print(json.dumps(obj))


def _outcome_json(system: TagSystem, outcome) -> dict:
    return {"kind": outcome.kind.value, "steps": outcome.steps, "period": outcome.period,
            "entry_step": outcome.entry_step, "max_length": outcome.max_length,
            "final_length": len(outcome.word)}


# ---------------------------------------------------------------- commands

def cmd_run(args) -> int:
    system, out = _system(args), _out_dir(args)
    word = _initial_word(args, system)
    _write_config(out, args, system, {"initial_word": format_word(word, system.mu)})
    outcome = run(system, word, _budget(args), detect_cycles=not args.no_detect)
    result = _outcome_json(system, outcome)
    with open(out / "run.json", "w", encoding="utf-8") as fh:
        json.dump(result, fh, indent=2)
        fh.write("\n")
    _emit(result)
    return EXIT_OK


def cmd_reach(args) -> int:
    system, out = _system(args), _out_dir(args)
    word = _initial_word(args, system)
    target = parse_word(args.target, system.mu)
    _write_config(out, args, system, {"initial_word": format_word(word, system.mu)})
    res = reaches(system, word, target, _budget(args))
    result = {"found": res.found, "step": res.step, "definitive_miss": res.definitive_miss,
              "outcome": _outcome_json(system, res.outcome) if res.outcome else None}
    _emit(result)
    return EXIT_OK


def cmd_classify_period(args) -> int:
    system, out = _system(args), _out_dir(args)
    word = _initial_word(args, system)
    _write_config(out, args, system, {"initial_word": format_word(word, system.mu)})
    try:
        orbit = periodic_set(system, word, _budget(args))
    except NoCycleWithinBudget as exc:
        if exc.outcome.kind.value == "BudgetExhausted":
            raise CliError(EXIT_BUDGET, str(exc), kind=exc.outcome.kind.value, steps=exc.outcome.steps) from None
        raise CliError(EXIT_CONFIG, f"word is not eventually periodic: {exc}", kind=exc.outcome.kind.value) from None
    try:
        kind = classify_period_type(orbit).value
    except UnclassifiableOrbit:
        kind = UNCLASSIFIABLE
    record = orbit.to_record(system.mu, kind)
    dump_orbits(out / "orbit.jsonl", [record])
    _emit({"period": orbit.period, "type": kind, "structure_lengths": orbit.structure_lengths()})
    return EXIT_OK


def cmd_collatz_verify(args) -> int:
    out = _out_dir(args)
    _write_config(out, args, load_system("collatz"))
    summary = SweepSummary()
    with open(out / "collatz.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "phases", "tag_steps", "max_word_length", "verdict"])
        try:
            for trace in iter_collatz(args.max_n, args.max_phases):
                summarize(summary, trace)
                w.writerow([trace.n0, len(trace.phases), trace.tag_steps, trace.max_word_length,
                            trace.verdict.value])
        except OracleMismatch as exc:
            raise CliError(EXIT_ORACLE, str(exc), n=exc.n0, phase=exc.index, expected=exc.expected,
                           got=exc.got) from None
    _emit({"checked": args.max_n, "reached_one": summary.verified, "mismatches": 0,
           "max_phases": summary.max_phases, "max_word_length": summary.max_word_length,
           "total_tag_steps": summary.total_tag_steps, "exhausted": summary.exhausted})
    if summary.exhausted:
        raise CliError(EXIT_BUDGET, f"{len(summary.exhausted)} values did not reach 1 within {args.max_phases} phases",
                       first=summary.exhausted[0])
    return EXIT_OK


def _v_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected V or VMIN:VMAX, got {text!r}") from None


def cmd_generate(args) -> int:
    out = _out_dir(args)
    v_min, v_max = args.v
    spec = ClassSpec(args.mu, v_min, v_max, args.excess_max)
    _write_config(out, args, None, {"prng": PRNG, "class_spec": asdict(spec)})
    cands = generate_candidates(spec, args.seed, args.count, args.balance, args.survive, args.pilot_words,
                                args.pilot_length, _budget(args))
    with open(out / "candidates.jsonl", "w", encoding="utf-8") as fh:
        for c in cands:
            fh.write(json.dumps({"index": c.index, "system": c.system.to_text(), **c.report.to_json()}) + "\n")
    sel_dir = out / "selected"
    for c in cands:
        if c.selected:
            sel_dir.mkdir(exist_ok=True)
            (sel_dir / f"candidate_{c.index:05d}.tag").write_text(c.system.to_text(), encoding="utf-8")
    counts: dict[str, int] = {}
    for c in cands:
        counts[c.report.screen_outcome.value] = counts.get(c.report.screen_outcome.value, 0) + 1
    _emit({"count": len(cands), "selected": sum(c.selected for c in cands), "outcomes": counts})
    return EXIT_OK


def cmd_screen(args) -> int:
    system, out = _system(args), _out_dir(args)
    _write_config(out, args, system)
    report = screen(system, candidate_rng(args.seed, 0), args.balance, args.survive, args.pilot_words,
                    args.pilot_length, _budget(args))
    _emit(report.to_json())
    return EXIT_OK


def cmd_exp1(args) -> int:
    system, out = _system(args), _out_dir(args)
    _write_config(out, args, system)
    res = exp1_census(system, args.words, args.length, _budget(args), args.seed, args.system_id, args.workers)
    write_census(out / "census.csv", res.records)
    write_survival(out / "survival.csv", res.survival)
    first, last = decile_fractions(res.records, args.max_steps)
    _emit({"histogram": res.histogram, "first_decile_fraction": first, "last_decile_fraction": last})
    return EXIT_OK


def cmd_exp2(args) -> int:
    system, out = _system(args), _out_dir(args)
    census = Path(args.census) if args.census else out / "census.csv"
    if not census.exists():
        raise CliError(EXIT_CONFIG, f"census file {census} not found; run exp1 first or pass --census")
    _write_config(out, args, system, {"census_path": str(census)})
    res = exp2_period_census(read_census(census), system)
    dump_orbits(out / "periods.jsonl", res.orbits)
    _emit({"by_record": res.by_record, "by_orbit": res.by_orbit})
    return EXIT_OK


def cmd_exp3(args) -> int:
    system, out = _system(args), _out_dir(args)
    word = _initial_word(args, system)
    _write_config(out, args, system, {"initial_word": format_word(word, system.mu)})
    res = exp3_sensitivity(system, word, _budget(args))
    write_sensitivity(out / "sensitivity.csv", res)
    _emit({"score": res.score, "substitutions": len(res.rows)})
    return EXIT_OK


def _stream(args, system: TagSystem, word) -> np.ndarray:
    if args.mode == "scanned":
        return scanned_stream(system, word, args.stream_length, _budget(args))
    return word_stream(system, word, args.stream_length, _budget(args))


def cmd_exp4(args) -> int:
    system, out = _system(args), _out_dir(args)
    word = _initial_word(args, system)
    _write_config(out, args, system, {"initial_word": format_word(word, system.mu)})
    if args.export_stream:
        bits = _stream(args, system, word)
        Path(args.export_stream).write_bytes(np.packbits(bits.astype(np.uint8)).tobytes())
    results = exp4_randomness(system, word, _budget(args), args.stream_length, args.mode, args.alpha)
    write_randomness(out / "randomness.csv", results, {"mode": args.mode})
    _emit({r.name: {"p_value": r.p_value, "passed": r.passed} for r in results})
    return EXIT_OK


def cmd_exp5(args) -> int:
    system, out = _system(args), _out_dir(args)
    word = _initial_word(args, system)
    _write_config(out, args, system, {"initial_word": format_word(word, system.mu)})
    reports = [exp5_entropy(system, word, _budget(args), args.stream_length, k, args.smoothing, args.mode)
               for k in args.order]
    write_entropy(out / "entropy.csv", reports, {"mode": args.mode})
    _emit({f"order_{r.order}": r.rate for r in reports})
    return EXIT_OK


def cmd_soak(args) -> int:
    system, out = _system(args), _out_dir(args)
    word = parse_word(args.word or SOAK_WORD, system.mu)
    _write_config(out, args, system, {"initial_word_length": len(word)})
    res = soak(system, word, out, args.interval, args.checkpoints, resume=not args.no_resume)
    _emit({"step": res.step, "length": res.length, "max_length": res.max_length,
           "word_hash": f"{res.word_hash:016x}", "kind": res.kind, "checkpoints_written": res.checkpoints_written,
           "resumed_from": res.resumed_from})
    return EXIT_OK


def cmd_bench(args) -> int:
    system, out = _system(args), _out_dir(args)
    word = parse_word(args.word or SOAK_WORD, system.mu)
    _write_config(out, args, system, {"initial_word_length": len(word)})
    try:
        rate = throughput_bench(system, word, args.steps)
    except EarlyTermination as exc:
        raise CliError(EXIT_BUDGET, str(exc), step=exc.step, kind=exc.kind.value) from None
    _emit({"steps": args.steps, "steps_per_second": rate})
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--preset", help="built-in system: post-00-1101, fig1-right, collatz (default post-00-1101)")
    src.add_argument("--system", metavar="FILE", help="system text file (first line v=<int>, then 'i -> word')")
    common.add_argument("--out", metavar="DIR", help=f"output directory (default ${OUTPUT_ENV} or {DEFAULT_OUTPUT})")
    common.add_argument("--max-steps", type=int, default=RunBudget.max_steps)
    common.add_argument("--max-length", type=int, default=RunBudget.max_length)
    common.add_argument("--no-timestamp", action="store_true", help="omit generated_at from config.json")

    word = _Parser(add_help=False)
    word.add_argument("--word", help="initial word, e.g. 001101 or (100)^110")
    word.add_argument("--length", type=int, default=300, help="length of a random word when --word is absent")
    word.add_argument("--seed", type=int, default=0)
    word.add_argument("--word-index", type=int, default=0, help="index of the random word in the seeded family")

    pilot = _Parser(add_help=False)
    pilot.add_argument("--balance", choices=("eq0", "le0"), default="eq0")
    pilot.add_argument("--survive", choices=("all", "any"), default="all")
    pilot.add_argument("--pilot-words", type=int, default=20)
    pilot.add_argument("--pilot-length", type=int, default=300)

    stream = _Parser(add_help=False)
    stream.add_argument("--stream-length", type=int, default=1_000_000)
    stream.add_argument("--mode", choices=("scanned", "words"), default="scanned",
                        help="scanned symbols (one per step) or the concatenation of successive words")

    p = _Parser(prog="taglab", description="Tag-system laboratory.")
    p.add_argument("--version", action="version", version=f"taglab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("run", parents=[common, word], help="run one word to a terminal outcome")
    s.add_argument("--no-detect", action="store_true", help="disable cycle detection")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("reach", parents=[common, word], help="does the trajectory produce a target word")
    s.add_argument("--target", required=True)
    s.set_defaults(func=cmd_reach)

    s = sub.add_parser("classify-period", parents=[common, word], help="period type of the orbit a word enters")
    s.set_defaults(func=cmd_classify_period)

    s = sub.add_parser("collatz-verify", parents=[common], help="check the Collatz reduction against arithmetic")
    s.add_argument("--max-n", type=int, default=1000)
    s.add_argument("--max-phases", type=int, default=100_000)
    s.set_defaults(func=cmd_collatz_verify)

    s = sub.add_parser("generate", parents=[common, pilot], help="sample and screen random systems")
    s.add_argument("--mu", type=int, default=2)
    s.add_argument("--v", type=_v_range, default=(3, 15), metavar="VMIN:VMAX")
    s.add_argument("--excess-max", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=100)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("screen", parents=[common, pilot], help="screen one system")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_screen)

    s = sub.add_parser("exp1", parents=[common], help="outcome census and survival curve")
    s.add_argument("--words", type=int, default=1998)
    s.add_argument("--length", type=int, default=300)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--system-id")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_exp1)

    s = sub.add_parser("exp2", parents=[common], help="period types of the periodic census runs")
    s.add_argument("--census", metavar="CSV", help="census.csv from exp1 (default: in the output directory)")
    s.set_defaults(func=cmd_exp2)

    s = sub.add_parser("exp3", parents=[common, word], help="sensitivity to single-symbol substitutions")
    s.set_defaults(func=cmd_exp3)

    s = sub.add_parser("exp4", parents=[common, word, stream], help="randomness battery on a symbol stream")
    s.add_argument("--alpha", type=float, default=0.01)
    s.add_argument("--export-stream", metavar="FILE", help="also write the stream as packed bits")
    s.set_defaults(func=cmd_exp4)

    s = sub.add_parser("exp5", parents=[common, word, stream], help="Markov entropy rate of a symbol stream")
    s.add_argument("--order", type=int, nargs="+", default=[1])
    s.add_argument("--smoothing", type=float, default=0.0, help="pseudocount per cell (0 = plug-in estimate)")
    s.set_defaults(func=cmd_exp5)

    s = sub.add_parser("soak", parents=[common], help="checkpointed long run (default Post's system from (100)^110)")
    s.add_argument("--word", help=f"initial word (default {SOAK_WORD})")
    s.add_argument("--interval", type=int, default=DEFAULT_INTERVAL, help="steps between checkpoints")
    s.add_argument("--checkpoints", type=int, help="stop after this many checkpoint intervals")
    s.add_argument("--no-resume", action="store_true", help="ignore an existing checkpoint")
    s.set_defaults(func=cmd_soak)

    s = sub.add_parser("bench", parents=[common], help="steps per second without cycle detection")
    s.add_argument("--word", help=f"initial word (default {SOAK_WORD})")
    s.add_argument("--steps", type=int, default=10**8)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        err = exc
    except OracleMismatch as exc:
        err = CliError(EXIT_ORACLE, str(exc))
    except EarlyTermination as exc:
        err = CliError(EXIT_BUDGET, str(exc), step=exc.step, kind=exc.kind.value)
    except (TagSystemError, CheckpointMismatch, StreamTooShort, ValueError, OSError) as exc:
        err = CliError(EXIT_CONFIG, str(exc), error_type=type(exc).__name__)
    print(json.dumps({"error": str(err), "exit_code": err.code, **err.details}), file=sys.stderr)
    return err.code


if __name__ == "__main__":
    sys.exit(main())
