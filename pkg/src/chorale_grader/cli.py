"""Command-line surface: profiling, grading, set evaluation, discrimination, corruption.

Exit codes are a stable contract: 0 success, 1 partial failure (some inputs
skipped with warnings), 2 unusable input. All output is deterministic given
the inputs and flags; chorales may be parsed and graded by parallel workers
(capped by ``CHORALE_GRADER_THREADS``) but results are always emitted in
input order.
"""

from __future__ import annotations

import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, TypeVar

import click

from .canonical import parse_canonical_json, write_canonical_json
from .corruption import corrupt as corrupt_chorale
from .errors import ChoraleGraderError
from .features import FEATURE_IDS
from .grading import EvaluationSummary, GradeReport, discriminate, evaluate_sets, grade
from .model import Chorale
from .musicxml import parse_musicxml
from .profile import build_profile, load_profile, save_profile

T = TypeVar("T")
U = TypeVar("U")

# Report column names for the nine features plus the overall grade.
FEATURE_TITLES = {
    "pitch": "Note",
    "rhythm": "Rhythm",
    "parallel-errors": "Parallel Errors",
    "harmonic-quality": "Harmonic Quality",
    "intervals-soprano": "S Intervals",
    "intervals-alto": "A Intervals",
    "intervals-tenor": "T Intervals",
    "intervals-bass": "B Intervals",
    "repeated-sequence": "Repeated Sequence",
}

# Column order used by evaluation tables.
TABLE_ORDER = (
    "pitch",
    "rhythm",
    "parallel-errors",
    "harmonic-quality",
    "intervals-soprano",
    "intervals-alto",
    "intervals-tenor",
    "intervals-bass",
    "repeated-sequence",
)

CHORALE_SUFFIXES = (".json", ".xml", ".musicxml")


def worker_count() -> int:
    raw = os.environ.get("CHORALE_GRADER_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError:
        raise click.UsageError(f"CHORALE_GRADER_THREADS={raw!r} is not an integer") from None
    if count < 1:
        raise click.UsageError("CHORALE_GRADER_THREADS must be >= 1")
    return count


def ordered_parallel_map(fn: Callable[[T], U], items: Sequence[T]) -> list[U]:
    """Apply fn across workers, returning results in input order."""
    workers = min(worker_count(), max(1, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def load_chorale(path: Path) -> Chorale:
    """Parse one chorale file by extension (canonical JSON or MusicXML)."""
    data = path.read_bytes()
    if path.suffix.lower() == ".json":
        return parse_canonical_json(data)
    return parse_musicxml(data, default_id=path.stem)


def chorale_files(directory: Path) -> list[Path]:
    return sorted(
        p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in CHORALE_SUFFIXES
    )


def _load_directory(directory: Path) -> tuple[list[Chorale], list[tuple[Path, str]]]:
    paths = chorale_files(directory)

    def attempt(path: Path):
        try:
            return load_chorale(path)
        except (ChoraleGraderError, OSError) as exc:
            return exc

    results = ordered_parallel_map(attempt, paths)
    chorales: list[Chorale] = []
    failures: list[tuple[Path, str]] = []
    for path, result in zip(paths, results):
        if isinstance(result, Chorale):
            chorales.append(result)
        else:
            failures.append((path, str(result)))
    return chorales, failures


def _warn(message: str) -> None:
    click.echo(f"warning: {message}", err=True)


@click.group()
def main() -> None:
    """Grade four-part chorales against a reference corpus profile."""


@main.group()
def profile() -> None:
    """Build and inspect corpus profiles."""


@profile.command("build")
@click.argument("directory", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("-o", "--output", "output_path", required=True, type=click.Path(path_type=Path))
def profile_build(directory: Path, output_path: Path) -> None:
    """Pool every parseable chorale in DIRECTORY into a profile file."""
    chorales, failures = _load_directory(directory)
    for path, message in failures:
        _warn(f"{path}: {message}")
    if len(chorales) < 2:
        click.echo(f"error: need at least 2 parseable chorales, got {len(chorales)}", err=True)
        sys.exit(2)
    try:
        corpus_profile = build_profile(chorales)
    except ChoraleGraderError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    save_profile(corpus_profile, output_path)
    click.echo(f"corpus_size: {corpus_profile.corpus_size}")
    click.echo(f"error_note_ratio: {corpus_profile.corpus_error_note_ratio!r}")
    click.echo(f"content_hash: {corpus_profile.content_hash}")
    if corpus_profile.corpus_error_note_ratio == 0:
        _warn("corpus has zero parallel errors; only error-free chorales can be graded")
    sys.exit(1 if failures else 0)


def _format_report_table(report: GradeReport) -> str:
    lines = [
        f"chorale: {report.chorale_id}",
        f"overall grade: {report.overall_grade:.2f}",
        f"{'feature':<20}{'distance':>10}{'weight':>10}{'contribution':>14}",
    ]
    for fid, fg in report.ranked_features():
        lines.append(
            f"{fid:<20}{fg.distance:>10.2f}{fg.weight:>10.2f}{fg.contribution:>14.2f}"
        )
    return "\n".join(lines)


@main.command("grade")
@click.argument("files", nargs=-1, required=True, type=click.Path(path_type=Path))
@click.option("--profile", "profile_path", required=True, type=click.Path(path_type=Path))
@click.option(
    "--format", "output_format", type=click.Choice(["table", "json"]), default="table"
)
def grade_cmd(files: tuple[Path, ...], profile_path: Path, output_format: str) -> None:
    """Grade chorale FILES against a profile; table ranks weaknesses first."""
    corpus_profile = _load_profile_or_exit(profile_path)

    def attempt(path: Path):
        try:
            return grade(load_chorale(path), corpus_profile)
        except (ChoraleGraderError, OSError) as exc:
            return exc

    results = ordered_parallel_map(attempt, files)
    reports = []
    any_failed = False
    for path, result in zip(files, results):
        if isinstance(result, GradeReport):
            reports.append(result)
        else:
            any_failed = True
            click.echo(f"error: {path}: {result}", err=True)

    if output_format == "json":
        click.echo(json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=2))
    else:
        click.echo("\n\n".join(_format_report_table(r) for r in reports))
    sys.exit(1 if any_failed else 0)


def _load_profile_or_exit(profile_path: Path):
    try:
        return load_profile(profile_path)
    except (ChoraleGraderError, OSError) as exc:
        click.echo(f"error: cannot load profile {profile_path}: {exc}", err=True)
        sys.exit(2)


def _stats_row(label: str, summary, widths: list[int]) -> str:
    cells = [label.ljust(widths[0])]
    for i, fid in enumerate(TABLE_ORDER, start=1):
        median, stddev = summary.feature_stats[fid]
        cells.append(f"{median:.2f} ({stddev:.2f})".rjust(widths[i]))
    median, stddev = summary.overall_stats
    cells.append(f"{median:.2f} ({stddev:.2f})".rjust(widths[-1]))
    return "  ".join(cells)


def format_evaluation(summary: EvaluationSummary, label_a: str, label_b: str) -> str:
    """Render the two-set comparison table plus the KS separation line."""
    headers = [FEATURE_TITLES[fid] for fid in TABLE_ORDER] + ["Overall Grade"]
    label_width = max(len(label_a), len(label_b), len("set"))
    widths = [label_width] + [max(len(h), 13) for h in headers]
    header_row = "  ".join(
        ["set".ljust(widths[0])] + [h.rjust(w) for h, w in zip(headers, widths[1:])]
    )
    lines = [
        header_row,
        _stats_row(label_a, summary.set_a, widths),
        _stats_row(label_b, summary.set_b, widths),
        (
            f"KS statistic: {summary.ks.statistic:.4f}  p-value: {summary.ks.p_value:.3e}  "
            f"(n_a={summary.ks.n_a}, n_b={summary.ks.n_b})"
        ),
    ]
    if summary.ks.p_value_approximate:
        lines.append("note: small samples; asymptotic p-value is approximate")
    return "\n".join(lines)


@main.command("evaluate")
@click.option("--set-a", "dir_a", required=True, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--set-b", "dir_b", required=True, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--profile", "profile_path", required=True, type=click.Path(path_type=Path))
def evaluate_cmd(dir_a: Path, dir_b: Path, profile_path: Path) -> None:
    """Compare two chorale sets: per-feature median (stddev) rows plus a KS test."""
    corpus_profile = _load_profile_or_exit(profile_path)
    chorales_a, failures_a = _load_directory(dir_a)
    chorales_b, failures_b = _load_directory(dir_b)
    for path, message in failures_a + failures_b:
        _warn(f"{path}: {message}")
    if len(chorales_a) < 2 or len(chorales_b) < 2:
        click.echo("error: each set needs at least 2 parseable chorales", err=True)
        sys.exit(2)
    try:
        summary = evaluate_sets(chorales_a, chorales_b, corpus_profile)
    except ChoraleGraderError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    for summary_set in (summary.set_a, summary.set_b):
        for chorale_id, message in summary_set.failures:
            _warn(f"{chorale_id}: {message}")
    click.echo(format_evaluation(summary, dir_a.name or "set-a", dir_b.name or "set-b"))
    partial = bool(
        failures_a or failures_b or summary.set_a.failures or summary.set_b.failures
    )
    sys.exit(1 if partial else 0)


@main.command("discriminate")
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--profile", "profile_path", required=True, type=click.Path(path_type=Path))
def discriminate_cmd(pairs_path: Path, profile_path: Path) -> None:
    """Pick the better-graded chorale of each (real, other) pair in a CSV manifest."""
    corpus_profile = _load_profile_or_exit(profile_path)
    base = pairs_path.parent
    pairs: list[tuple[Chorale, Chorale]] = []
    skipped = 0
    with open(pairs_path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["real", "other"]:
            click.echo("error: manifest must have header 'real,other'", err=True)
            sys.exit(2)
        for row in reader:
            try:
                real = load_chorale((base / row["real"].strip()).resolve())
                other = load_chorale((base / row["other"].strip()).resolve())
            except (ChoraleGraderError, OSError, KeyError, AttributeError) as exc:
                skipped += 1
                _warn(f"row {reader.line_num}: {exc}")
                continue
            pairs.append((real, other))
    if not pairs:
        click.echo("error: no usable pairs in manifest", err=True)
        sys.exit(2)
    try:
        result = discriminate(pairs, corpus_profile)
    except ChoraleGraderError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    for pair_id, message in result.voided:
        _warn(f"{pair_id}: {message}")
    for outcome in result.outcomes:
        pick = outcome.reference_id if outcome.correct else outcome.other_id
        click.echo(
            f"{outcome.reference_id} ({outcome.reference_grade:.2f}) vs "
            f"{outcome.other_id} ({outcome.other_grade:.2f}) -> pick {pick} "
            f"[{'correct' if outcome.correct else 'incorrect'}]"
        )
    click.echo(f"accuracy: {result.accuracy:.4f} ({len(result.outcomes)} pairs)")
    sys.exit(1 if (skipped or result.voided) else 0)


@main.command("corrupt")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--rate", required=True, type=click.FloatRange(0, 1, min_open=True))
@click.option("--seed", required=True, type=int)
@click.option("-o", "--output", "output_path", required=True, type=click.Path(path_type=Path))
def corrupt_cmd(file: Path, rate: float, seed: int, output_path: Path) -> None:
    """Write a deterministically pitch-corrupted copy of FILE as canonical JSON."""
    try:
        chorale = load_chorale(file)
    except (ChoraleGraderError, OSError) as exc:
        click.echo(f"error: {file}: {exc}", err=True)
        sys.exit(2)
    corrupted = corrupt_chorale(chorale, rate, seed)
    Path(output_path).write_bytes(write_canonical_json(corrupted))
    click.echo(f"wrote {output_path}")
    sys.exit(0)


if __name__ == "__main__":
    main()
