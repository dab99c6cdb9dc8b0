"""Grading chorales against a corpus profile.

The grade is the weighted sum, over the nine features, of the Wasserstein
distance between the chorale's distribution and the profile's. All weights
are 1 except the parallel-error feature, whose weight scales with the
chorale's error density relative to the corpus. Grades are positive and
lower is better; the per-feature breakdown makes the dominant weaknesses of
a bad chorale directly visible.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .distributions import CATEGORICAL, Distribution
from .errors import (
    FeatureUndefinedError,
    GradingError,
    InsufficientSamplesError,
    MetricConventionError,
)
from .features import FEATURE_IDS, FEATURE_KINDS, PARALLEL_ERRORS, REPEATED_SEQUENCE
from .metrics import (
    KSResult,
    METRIC_CONVENTION,
    ks_two_sample,
    wasserstein_categorical,
    wasserstein_numeric,
)
from .model import Chorale
from .profile import CorpusProfile, observe, weight_for_error_ratio

_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FeatureGrade:
    """One feature's distance, weight, and weighted contribution."""

    distance: float
    weight: float
    contribution: float

    def __post_init__(self) -> None:
        if self.distance < 0 or self.weight < 0:
            raise ValueError("distances and weights are non-negative")
        if abs(self.contribution - self.weight * self.distance) > _SUM_TOLERANCE:
            raise ValueError("contribution must equal weight * distance")


@dataclass(frozen=True)
class GradeReport:
    """Per-feature breakdown plus the overall grade for one chorale."""

    chorale_id: str
    per_feature: Mapping[str, FeatureGrade]
    overall_grade: float

    def __post_init__(self) -> None:
        if set(self.per_feature) != set(FEATURE_IDS):
            raise ValueError("report must cover exactly the nine features")
        total = sum(fg.contribution for fg in self.per_feature.values())
        if abs(total - self.overall_grade) > _SUM_TOLERANCE:
            raise ValueError(f"overall grade {self.overall_grade} != sum {total}")

    def ranked_features(self) -> list[tuple[str, FeatureGrade]]:
        """Features sorted by contribution descending: worst weakness first."""
        return sorted(self.per_feature.items(), key=lambda kv: (-kv[1].contribution, kv[0]))

    def to_dict(self) -> dict:
        return {
            "chorale_id": self.chorale_id,
            "overall_grade": self.overall_grade,
            "features": {
                fid: {
                    "distance": fg.distance,
                    "weight": fg.weight,
                    "contribution": fg.contribution,
                }
                for fid, fg in self.per_feature.items()
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GradeReport":
        per_feature = {
            fid: FeatureGrade(spec["distance"], spec["weight"], spec["contribution"])
            for fid, spec in data["features"].items()
        }
        return cls(
            chorale_id=data["chorale_id"],
            per_feature=per_feature,
            overall_grade=data["overall_grade"],
        )


def _distance(fid: str, own: Distribution, reference: Distribution) -> float:
    if FEATURE_KINDS[fid] == CATEGORICAL:
        return wasserstein_categorical(own, reference)
    return wasserstein_numeric(own, reference)


def grade(c: Chorale, profile: CorpusProfile) -> GradeReport:
    """Grade one chorale against the profile (lower is better).

    The parallel-error feature contributes weight * distance with the
    dynamic error-density weight, which is exactly 0 for an error-free
    chorale. A chorale with no repetition at all receives the profile's
    recorded fallback distance for the repeated-sequence feature.
    """
    if profile.metric_convention != METRIC_CONVENTION:
        raise MetricConventionError(
            f"profile built under {profile.metric_convention!r}, "
            f"this library grades under {METRIC_CONVENTION!r}"
        )
    try:
        obs = observe(c)
    except FeatureUndefinedError as exc:
        raise GradingError(str(exc)) from None

    per_feature: dict[str, FeatureGrade] = {}
    for fid in FEATURE_IDS:
        reference = profile.feature_distributions[fid]
        if fid == PARALLEL_ERRORS:
            if obs.error_count == 0:
                per_feature[fid] = FeatureGrade(0.0, 0.0, 0.0)
                continue
            weight = weight_for_error_ratio(obs.error_note_ratio, profile)
            distance = wasserstein_categorical(obs.distribution(fid), reference)
            per_feature[fid] = FeatureGrade(distance, weight, weight * distance)
            continue
        if fid == REPEATED_SEQUENCE and not obs.counts[fid]:
            fallback = profile.repeated_sequence_fallback
            per_feature[fid] = FeatureGrade(fallback, 1.0, fallback)
            continue
        try:
            distance = _distance(fid, obs.distribution(fid), reference)
        except FeatureUndefinedError as exc:
            raise GradingError(f"{fid}: {exc}") from None
        per_feature[fid] = FeatureGrade(distance, 1.0, distance)

    overall = sum(per_feature[fid].contribution for fid in FEATURE_IDS)
    return GradeReport(chorale_id=c.id, per_feature=per_feature, overall_grade=overall)


@dataclass
class SetSummary:
    """Median/stddev per feature and overall for a set of graded chorales."""

    reports: list[GradeReport]
    failures: list[tuple[str, str]]
    feature_stats: dict[str, tuple[float, float]]
    overall_stats: tuple[float, float]

    @property
    def grades(self) -> list[float]:
        return [r.overall_grade for r in self.reports]


def grade_set(chorales: Sequence[Chorale], profile: CorpusProfile) -> SetSummary:
    """Grade a set; failures become warnings and stats cover the successes.

    Per-feature statistics are over weighted contributions, so the
    parallel-error column reflects both error mix and error density.
    """
    reports: list[GradeReport] = []
    failures: list[tuple[str, str]] = []
    for c in chorales:
        try:
            reports.append(grade(c, profile))
        except (GradingError, FeatureUndefinedError) as exc:
            failures.append((c.id, str(exc)))
    if len(reports) < 2:
        raise InsufficientSamplesError(
            f"need at least 2 graded chorales for set statistics, got {len(reports)}"
        )
    feature_stats = {}
    for fid in FEATURE_IDS:
        values = [r.per_feature[fid].contribution for r in reports]
        feature_stats[fid] = (statistics.median(values), statistics.stdev(values))
    grades = [r.overall_grade for r in reports]
    overall_stats = (statistics.median(grades), statistics.stdev(grades))
    return SetSummary(
        reports=reports,
        failures=failures,
        feature_stats=feature_stats,
        overall_stats=overall_stats,
    )


@dataclass(frozen=True)
class PairOutcome:
    """One discrimination decision; correct means the reference graded better."""

    reference_id: str
    other_id: str
    reference_grade: float
    other_grade: float

    @property
    def correct(self) -> bool:
        return self.reference_grade < self.other_grade


@dataclass
class DiscriminationResult:
    accuracy: float
    outcomes: list[PairOutcome]
    voided: list[tuple[str, str]] = field(default_factory=list)


def discriminate(
    pairs: Sequence[tuple[Chorale, Chorale]], profile: CorpusProfile
) -> DiscriminationResult:
    """Pick the better-graded chorale of each (reference, other) pair.

    A pair is correct iff the reference (first) chorale receives the strictly
    lower grade; exact ties count as incorrect. Pairs where either side fails
    to grade are voided with a warning and excluded from the accuracy.
    """
    outcomes: list[PairOutcome] = []
    voided: list[tuple[str, str]] = []
    for reference, other in pairs:
        try:
            ref_report = grade(reference, profile)
            other_report = grade(other, profile)
        except (GradingError, FeatureUndefinedError) as exc:
            voided.append((f"{reference.id} vs {other.id}", str(exc)))
            continue
        outcomes.append(
            PairOutcome(
                reference_id=reference.id,
                other_id=other.id,
                reference_grade=ref_report.overall_grade,
                other_grade=other_report.overall_grade,
            )
        )
    if not outcomes:
        raise InsufficientSamplesError("no gradeable pairs")
    accuracy = sum(1 for o in outcomes if o.correct) / len(outcomes)
    return DiscriminationResult(accuracy=accuracy, outcomes=outcomes, voided=voided)


@dataclass
class EvaluationSummary:
    """Two graded sets side by side plus a KS test on their overall grades."""

    set_a: SetSummary
    set_b: SetSummary
    ks: KSResult
    discrimination_accuracy: Optional[float] = None


def evaluate_sets(
    set_a: Sequence[Chorale], set_b: Sequence[Chorale], profile: CorpusProfile
) -> EvaluationSummary:
    """Grade both sets and test how separable their grade distributions are."""
    summary_a = grade_set(set_a, profile)
    summary_b = grade_set(set_b, profile)
    ks = ks_two_sample(summary_a.grades, summary_b.grades)
    return EvaluationSummary(set_a=summary_a, set_b=summary_b, ks=ks)
