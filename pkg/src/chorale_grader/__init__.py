"""Grade four-part chorales against a reference corpus profile.

A chorale is represented as a set of per-feature distributions (scale-degree
usage, note lengths, per-voice melodic intervals, vertical harmonic quality,
parallel part-writing errors, repeated-sequence lengths). The grade of a
chorale is the weighted sum of Wasserstein distances between its
distributions and the pooled distributions of a reference corpus: positive,
and lower is better.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .canonical import parse_canonical_json, write_canonical_json
from .corruption import corrupt
from .distributions import CATEGORICAL, NUMERIC, Distribution
from .errors import (
    ChoraleGraderError,
    DegenerateProfileError,
    FeatureUndefinedError,
    GradingError,
    InsufficientSamplesError,
    MetricConventionError,
    ParseError,
    ProfileBuildError,
    SupportMismatchError,
    UnsupportedFeatureError,
    VoiceCountError,
)
from .features import (
    FEATURE_IDS,
    FEATURE_KINDS,
    PARALLEL_ERROR_KINDS,
    QUALITY_LABELS,
    RepeatedPattern,
    find_repeated_patterns,
    harmonic_quality_distribution,
    harmonic_slices,
    interval_distribution,
    parallel_errors,
    pitch_distribution,
    repeated_sequence_distribution,
    rhythm_distribution,
)
from .grading import (
    DiscriminationResult,
    EvaluationSummary,
    FeatureGrade,
    GradeReport,
    SetSummary,
    discriminate,
    evaluate_sets,
    grade,
    grade_set,
)
from .keydetect import detect_key
from .metrics import (
    KSResult,
    METRIC_CONVENTION,
    ks_two_sample,
    wasserstein_categorical,
    wasserstein_numeric,
)
from .model import (
    Chorale,
    Key,
    NoteEvent,
    ScaleDegree,
    SpelledPitch,
    Voice,
    VOICE_LABELS,
    directed_interval,
    midi,
    scale_degree,
)
from .musicxml import parse_musicxml
from .profile import (
    CorpusProfile,
    build_profile,
    load_profile,
    parallel_weight,
    profile_from_json,
    profile_to_json,
    save_profile,
)

__version__ = "0.1.0"

__all__ = [
    "CATEGORICAL",
    "Chorale",
    "ChoraleGraderError",
    "CorpusProfile",
    "DegenerateProfileError",
    "DiscriminationResult",
    "Distribution",
    "EvaluationSummary",
    "FEATURE_IDS",
    "FEATURE_KINDS",
    "FeatureGrade",
    "FeatureUndefinedError",
    "GradeReport",
    "GradingError",
    "InsufficientSamplesError",
    "KERNEL_BACKEND",
    "KSResult",
    "Key",
    "METRIC_CONVENTION",
    "MetricConventionError",
    "NUMERIC",
    "NoteEvent",
    "PARALLEL_ERROR_KINDS",
    "ParseError",
    "ProfileBuildError",
    "QUALITY_LABELS",
    "RepeatedPattern",
    "ScaleDegree",
    "SetSummary",
    "SpelledPitch",
    "SupportMismatchError",
    "UnsupportedFeatureError",
    "VOICE_LABELS",
    "Voice",
    "VoiceCountError",
    "build_profile",
    "corrupt",
    "detect_key",
    "directed_interval",
    "discriminate",
    "evaluate_sets",
    "find_repeated_patterns",
    "grade",
    "grade_set",
    "harmonic_quality_distribution",
    "harmonic_slices",
    "interval_distribution",
    "ks_two_sample",
    "load_profile",
    "midi",
    "parallel_errors",
    "parallel_weight",
    "parse_canonical_json",
    "parse_musicxml",
    "pitch_distribution",
    "profile_from_json",
    "profile_to_json",
    "repeated_sequence_distribution",
    "rhythm_distribution",
    "save_profile",
    "scale_degree",
    "wasserstein_categorical",
    "wasserstein_numeric",
    "write_canonical_json",
]
