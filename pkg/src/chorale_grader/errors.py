"""Exception hierarchy for the chorale grader."""


class ChoraleGraderError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ChoraleGraderError):
    """Input document is malformed or violates the expected schema."""


class VoiceCountError(ParseError):
    """Score does not reduce to exactly four voices."""


class UnsupportedFeatureError(ParseError):
    """Score uses a notation element outside the supported subset."""


class FeatureUndefinedError(ChoraleGraderError):
    """A feature distribution is undefined for the given input."""


class SupportMismatchError(ChoraleGraderError):
    """Distance requested between distributions of incompatible kinds."""


class InsufficientSamplesError(ChoraleGraderError):
    """A statistic was requested on fewer samples than it needs."""


class ProfileBuildError(ChoraleGraderError):
    """A corpus profile could not be built from the given chorales."""


class DegenerateProfileError(ChoraleGraderError):
    """The profile cannot support the requested operation (e.g. zero error ratio)."""


class MetricConventionError(ChoraleGraderError):
    """Profile was built under a different metric convention than this library."""


class GradingError(ChoraleGraderError):
    """Feature extraction failed while grading; message carries the feature id."""
