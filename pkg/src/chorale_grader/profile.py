"""Corpus profiles: pooled ground-truth feature distributions plus metadata.

A profile pools raw observations (note events, intervals, slices, errors,
pattern occurrences) from every corpus chorale and normalizes once at corpus
level, so chorales weigh in proportion to their actual note counts. The file
format embeds the metric convention and a content hash; grading refuses
profiles built under a different convention, and loading refuses tampered or
truncated files.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Union

from .canonical import dump_canonical, format_rational, parse_rational
from .distributions import CATEGORICAL, NUMERIC, Distribution
from .errors import DegenerateProfileError, FeatureUndefinedError, ParseError, ProfileBuildError
from .features import (
    FEATURE_IDS,
    FEATURE_KINDS,
    HARMONIC_QUALITY,
    PARALLEL_ERRORS,
    PITCH,
    REPEATED_SEQUENCE,
    RHYTHM,
    harmonic_quality_counts,
    interval_counts,
    interval_feature_id,
    parallel_error_counts,
    pitch_counts,
    repeated_sequence_counts,
    rhythm_counts,
)
from .metrics import METRIC_CONVENTION, wasserstein_numeric
from .model import Chorale

PROFILE_VERSION = 1


@dataclass
class ChoraleObservations:
    """Raw per-feature observation counts for one chorale."""

    chorale_id: str
    counts: dict[str, Counter]
    note_count: int
    error_count: int

    @property
    def error_note_ratio(self) -> float:
        return self.error_count / self.note_count

    def distribution(self, feature_id: str) -> Distribution:
        return Distribution.from_counts(FEATURE_KINDS[feature_id], self.counts[feature_id])


def observe(c: Chorale) -> ChoraleObservations:
    """Extract every feature's raw counts from a chorale."""
    counts: dict[str, Counter] = {
        PITCH: pitch_counts(c),
        RHYTHM: rhythm_counts(c),
        HARMONIC_QUALITY: harmonic_quality_counts(c),
        PARALLEL_ERRORS: parallel_error_counts(c),
        REPEATED_SEQUENCE: repeated_sequence_counts(c),
    }
    for voice in c.voices:
        counts[interval_feature_id(voice.label)] = interval_counts(voice)
    return ChoraleObservations(
        chorale_id=c.id,
        counts=counts,
        note_count=c.note_count,
        error_count=sum(counts[PARALLEL_ERRORS].values()),
    )


@dataclass(frozen=True)
class CorpusProfile:
    """Pooled reference distributions for all nine features plus corpus stats."""

    feature_distributions: Mapping[str, Distribution]
    corpus_error_note_ratio: float
    corpus_size: int
    metric_convention: str
    content_hash: str
    repeated_sequence_fallback: float

    def __post_init__(self) -> None:
        missing = set(FEATURE_IDS) - set(self.feature_distributions)
        if missing:
            raise ValueError(f"profile missing features {sorted(missing)}")
        if self.corpus_size < 2:
            raise ValueError("profile needs a corpus of at least 2 chorales")
        if self.corpus_error_note_ratio < 0 or self.repeated_sequence_fallback < 0:
            raise ValueError("negative profile statistics")


def build_profile(corpus: Iterable[Chorale]) -> CorpusProfile:
    """Pool observations from the corpus into a ground-truth profile.

    Raises ProfileBuildError naming the offending chorale when feature
    extraction fails, and when the pooled corpus shows no repetition at all
    (a corpus that repeats nothing cannot anchor the repeated-sequence
    feature). A corpus with zero parallel errors is legal but degenerate:
    its error ratio is 0 and only error-free chorales can be graded with it.
    """
    chorales = list(corpus)
    if len(chorales) < 2:
        raise ProfileBuildError(f"need at least 2 chorales, got {len(chorales)}")

    observations = []
    for c in chorales:
        try:
            observations.append(observe(c))
        except FeatureUndefinedError as exc:
            raise ProfileBuildError(f"chorale {c.id!r}: {exc}") from None

    pooled: dict[str, Counter] = {fid: Counter() for fid in FEATURE_IDS}
    for obs in observations:
        for fid in FEATURE_IDS:
            pooled[fid].update(obs.counts[fid])

    if not pooled[REPEATED_SEQUENCE]:
        raise ProfileBuildError("corpus contains no repeated sequences in any chorale")

    distributions = {
        fid: Distribution.from_counts(FEATURE_KINDS[fid], pooled[fid]) for fid in FEATURE_IDS
    }

    total_notes = sum(obs.note_count for obs in observations)
    total_errors = sum(obs.error_count for obs in observations)

    # Grading falls back to the worst distance any corpus member shows on the
    # repeated-sequence feature when a graded chorale repeats nothing at all:
    # total absence of repetition should score no better than the corpus's
    # least repetitive member.
    pooled_repeats = distributions[REPEATED_SEQUENCE]
    fallback = 0.0
    for obs in observations:
        if obs.counts[REPEATED_SEQUENCE]:
            d = wasserstein_numeric(obs.distribution(REPEATED_SEQUENCE), pooled_repeats)
            fallback = max(fallback, d)

    payload = _jsonable(
        distributions,
        corpus_error_note_ratio=total_errors / total_notes,
        corpus_size=len(chorales),
        repeated_sequence_fallback=fallback,
    )
    return CorpusProfile(
        feature_distributions=distributions,
        corpus_error_note_ratio=total_errors / total_notes,
        corpus_size=len(chorales),
        metric_convention=METRIC_CONVENTION,
        content_hash=_content_hash(payload),
        repeated_sequence_fallback=fallback,
    )


def weight_for_error_ratio(error_note_ratio: float, profile: CorpusProfile) -> float:
    """Error-density weight given a chorale's error-to-note ratio."""
    if profile.corpus_error_note_ratio == 0:
        raise DegenerateProfileError(
            "profile corpus has no parallel errors; error weight is undefined"
        )
    return error_note_ratio / profile.corpus_error_note_ratio


def parallel_weight(c: Chorale, profile: CorpusProfile) -> float:
    """Per-chorale weight for the parallel-error feature.

    The ratio of the chorale's error-to-note ratio to the corpus's: large
    when the chorale commits errors far more densely than the reference
    corpus does, exactly 0 for an error-free chorale.
    """
    errors = sum(parallel_error_counts(c).values())
    return weight_for_error_ratio(errors / c.note_count, profile)


def _entry_value(fid: str, value: Union[Fraction, str]) -> str:
    return format_rational(value) if FEATURE_KINDS[fid] == NUMERIC else value


def _jsonable(
    distributions: Mapping[str, Distribution],
    corpus_error_note_ratio: float,
    corpus_size: int,
    repeated_sequence_fallback: float,
) -> dict:
    return {
        "version": PROFILE_VERSION,
        "metric_convention": METRIC_CONVENTION,
        "corpus_size": corpus_size,
        "corpus_error_note_ratio": corpus_error_note_ratio,
        "repeated_sequence_fallback": repeated_sequence_fallback,
        "features": {
            fid: {
                "kind": dist.kind,
                "entries": [[_entry_value(fid, v), m] for v, m in dist.entries],
            }
            for fid, dist in distributions.items()
        },
    }


def _content_hash(payload: dict) -> str:
    return hashlib.sha256(dump_canonical(payload)).hexdigest()


def profile_to_json(profile: CorpusProfile) -> bytes:
    payload = _jsonable(
        profile.feature_distributions,
        corpus_error_note_ratio=profile.corpus_error_note_ratio,
        corpus_size=profile.corpus_size,
        repeated_sequence_fallback=profile.repeated_sequence_fallback,
    )
    payload["content_hash"] = profile.content_hash
    return dump_canonical(payload)


def profile_from_json(document: bytes) -> CorpusProfile:
    """Parse and verify a profile file; refuses corrupted content."""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"$: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ParseError("$: expected an object")
    required = {
        "version",
        "metric_convention",
        "corpus_size",
        "corpus_error_note_ratio",
        "repeated_sequence_fallback",
        "features",
        "content_hash",
    }
    missing = required - data.keys()
    if missing:
        raise ParseError(f"$: missing keys {sorted(missing)}")
    if data["version"] != PROFILE_VERSION:
        raise ParseError(f"$.version: unsupported version {data['version']!r}")

    features_obj = data["features"]
    if not isinstance(features_obj, dict) or set(features_obj) != set(FEATURE_IDS):
        raise ParseError("$.features: expected exactly the nine feature ids")

    distributions: dict[str, Distribution] = {}
    for fid in FEATURE_IDS:
        spec = features_obj[fid]
        path = f"$.features.{fid}"
        if not isinstance(spec, dict) or set(spec) != {"kind", "entries"}:
            raise ParseError(f"{path}: expected kind and entries")
        if spec["kind"] != FEATURE_KINDS[fid]:
            raise ParseError(f"{path}.kind: expected {FEATURE_KINDS[fid]!r}")
        entries = []
        for i, pair in enumerate(spec["entries"]):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"{path}.entries[{i}]: expected [value, mass]")
            value, mass = pair
            if FEATURE_KINDS[fid] == NUMERIC:
                value = parse_rational(value, f"{path}.entries[{i}]")
            elif not isinstance(value, str):
                raise ParseError(f"{path}.entries[{i}]: expected a label string")
            if not isinstance(mass, (int, float)) or isinstance(mass, bool):
                raise ParseError(f"{path}.entries[{i}]: bad mass {mass!r}")
            entries.append((value, float(mass)))
        try:
            distributions[fid] = Distribution(FEATURE_KINDS[fid], tuple(entries))
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}") from None
        if fid != PARALLEL_ERRORS and distributions[fid].is_empty:
            raise ParseError(f"{path}: empty distribution")

    for field in ("corpus_error_note_ratio", "repeated_sequence_fallback"):
        if not isinstance(data[field], (int, float)) or isinstance(data[field], bool):
            raise ParseError(f"$.{field}: expected a number")
    if not isinstance(data["corpus_size"], int) or isinstance(data["corpus_size"], bool):
        raise ParseError("$.corpus_size: expected an integer")
    if not isinstance(data["metric_convention"], str):
        raise ParseError("$.metric_convention: expected a string")

    payload = _jsonable(
        distributions,
        corpus_error_note_ratio=data["corpus_error_note_ratio"],
        corpus_size=data["corpus_size"],
        repeated_sequence_fallback=data["repeated_sequence_fallback"],
    )
    payload["metric_convention"] = data["metric_convention"]
    expected = _content_hash(payload)
    if data["content_hash"] != expected:
        raise ParseError("$.content_hash: hash mismatch (file corrupted or edited)")

    try:
        return CorpusProfile(
            feature_distributions=distributions,
            corpus_error_note_ratio=float(data["corpus_error_note_ratio"]),
            corpus_size=data["corpus_size"],
            metric_convention=data["metric_convention"],
            content_hash=data["content_hash"],
            repeated_sequence_fallback=float(data["repeated_sequence_fallback"]),
        )
    except ValueError as exc:
        raise ParseError(f"$: {exc}") from None


def save_profile(profile: CorpusProfile, path: Union[str, Path]) -> None:
    Path(path).write_bytes(profile_to_json(profile))


def load_profile(path: Union[str, Path]) -> CorpusProfile:
    return profile_from_json(Path(path).read_bytes())
