"""Per-chorale musical feature distributions.

Nine features describe a chorale: scale-degree usage, note-length usage, one
directed-interval distribution per voice, vertical harmonic quality, parallel
part-writing errors, and lengths of repeated melodic sequences. Each extractor
is a pure function of an immutable ``Chorale``; identical inputs give
bit-identical distributions.
"""

from __future__ import annotations

from array import array
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from . import _kernels
from .distributions import CATEGORICAL, NUMERIC, Distribution
from .errors import FeatureUndefinedError
from .model import Chorale, SpelledPitch, Voice, VOICE_LABELS, directed_interval, scale_degree

# Feature identifiers, in report order.
PITCH = "pitch"
RHYTHM = "rhythm"
INTERVALS_SOPRANO = "intervals-soprano"
INTERVALS_ALTO = "intervals-alto"
INTERVALS_TENOR = "intervals-tenor"
INTERVALS_BASS = "intervals-bass"
HARMONIC_QUALITY = "harmonic-quality"
PARALLEL_ERRORS = "parallel-errors"
REPEATED_SEQUENCE = "repeated-sequence"

FEATURE_IDS = (
    PITCH,
    RHYTHM,
    INTERVALS_SOPRANO,
    INTERVALS_ALTO,
    INTERVALS_TENOR,
    INTERVALS_BASS,
    HARMONIC_QUALITY,
    PARALLEL_ERRORS,
    REPEATED_SEQUENCE,
)

FEATURE_KINDS = {
    PITCH: CATEGORICAL,
    RHYTHM: NUMERIC,
    INTERVALS_SOPRANO: NUMERIC,
    INTERVALS_ALTO: NUMERIC,
    INTERVALS_TENOR: NUMERIC,
    INTERVALS_BASS: NUMERIC,
    HARMONIC_QUALITY: CATEGORICAL,
    PARALLEL_ERRORS: CATEGORICAL,
    REPEATED_SEQUENCE: NUMERIC,
}


def interval_feature_id(voice_label: str) -> str:
    return f"intervals-{voice_label}"


# Closed label set for vertical sonority quality. Classification is by exact
# pitch-class-set template match at some root, so it is invariant to octave,
# inversion, and doubling; dyads and anything unmatched fall to OTHER.
QUALITY_MAJOR = "major"
QUALITY_MINOR = "minor"
QUALITY_DIMINISHED = "diminished"
QUALITY_AUGMENTED = "augmented"
QUALITY_DOMINANT_SEVENTH = "dominant-seventh"
QUALITY_MAJOR_SEVENTH = "major-seventh"
QUALITY_MINOR_SEVENTH = "minor-seventh"
QUALITY_HALF_DIMINISHED_SEVENTH = "half-diminished-seventh"
QUALITY_DIMINISHED_SEVENTH = "diminished-seventh"
QUALITY_OTHER = "other"

QUALITY_LABELS = (
    QUALITY_MAJOR,
    QUALITY_MINOR,
    QUALITY_DIMINISHED,
    QUALITY_AUGMENTED,
    QUALITY_DOMINANT_SEVENTH,
    QUALITY_MAJOR_SEVENTH,
    QUALITY_MINOR_SEVENTH,
    QUALITY_HALF_DIMINISHED_SEVENTH,
    QUALITY_DIMINISHED_SEVENTH,
    QUALITY_OTHER,
)

_QUALITY_TEMPLATES = (
    (QUALITY_MAJOR, frozenset({0, 4, 7})),
    (QUALITY_MINOR, frozenset({0, 3, 7})),
    (QUALITY_DIMINISHED, frozenset({0, 3, 6})),
    (QUALITY_AUGMENTED, frozenset({0, 4, 8})),
    (QUALITY_DOMINANT_SEVENTH, frozenset({0, 4, 7, 10})),
    (QUALITY_MAJOR_SEVENTH, frozenset({0, 4, 7, 11})),
    (QUALITY_MINOR_SEVENTH, frozenset({0, 3, 7, 10})),
    (QUALITY_HALF_DIMINISHED_SEVENTH, frozenset({0, 3, 6, 10})),
    (QUALITY_DIMINISHED_SEVENTH, frozenset({0, 3, 6, 9})),
)

# Closed label set for parallel part-writing errors. P1-contrary is
# geometrically impossible (two voices leaving and reaching a unison must
# move the same direction) and is excluded.
P1_SIMILAR = "P1-similar"
P5_SIMILAR = "P5-similar"
P5_CONTRARY = "P5-contrary"
P8_SIMILAR = "P8-similar"
P8_CONTRARY = "P8-contrary"

PARALLEL_ERROR_KINDS = (P1_SIMILAR, P5_SIMILAR, P5_CONTRARY, P8_SIMILAR, P8_CONTRARY)


def pitch_counts(c: Chorale) -> Counter:
    """Raw scale-degree counts, one per note event across all voices."""
    return Counter(scale_degree(ev.pitch, c.key).label for v in c.voices for ev in v.events)


def pitch_distribution(c: Chorale) -> Distribution:
    """Scale-degree usage over all voices, one count per note event.

    Counts are unweighted by duration, and enharmonic spellings stay
    distinct: #4 and b5 are different degrees.
    """
    return Distribution.from_counts(CATEGORICAL, pitch_counts(c))


def rhythm_counts(c: Chorale) -> Counter:
    """Raw note-length counts in quarter units, one per (tie-merged) event."""
    return Counter(ev.duration for v in c.voices for ev in v.events)


def rhythm_distribution(c: Chorale) -> Distribution:
    """Note-length usage in quarter units, one count per (tie-merged) event."""
    return Distribution.from_counts(NUMERIC, rhythm_counts(c))


def interval_counts(v: Voice) -> Counter:
    """Raw directed-interval counts between consecutive events of one voice."""
    if len(v) < 2:
        raise FeatureUndefinedError(f"{v.label}: need at least 2 events for intervals")
    return Counter(
        Fraction(directed_interval(a.pitch, b.pitch))
        for a, b in zip(v.events, v.events[1:])
    )


def interval_distribution(v: Voice) -> Distribution:
    """Directed melodic intervals (signed semitones) between consecutive events."""
    return Distribution.from_counts(NUMERIC, interval_counts(v))


def harmonic_slices(c: Chorale) -> list[tuple[Fraction, tuple[SpelledPitch, ...]]]:
    """Vertical slices: at each onset in any voice, the four covering pitches.

    Onsets where some voice has no sounding pitch (before its first note or
    after its last) are skipped.
    """
    onsets = sorted({ev.onset for v in c.voices for ev in v.events})
    slices: list[tuple[Fraction, tuple[SpelledPitch, ...]]] = []
    cursors = [0, 0, 0, 0]
    for t in onsets:
        pitches = []
        for vi, voice in enumerate(c.voices):
            events = voice.events
            i = cursors[vi]
            while i + 1 < len(events) and events[i + 1].onset <= t:
                i += 1
            cursors[vi] = i
            ev = events[i]
            if ev.onset <= t < ev.end:
                pitches.append(ev.pitch)
            else:
                break
        if len(pitches) == 4:
            slices.append((t, tuple(pitches)))
    return slices


def classify_quality(pitches: tuple[SpelledPitch, ...]) -> str:
    """Chord quality of a pitch collection by pitch-class-set template match."""
    pcs = frozenset(p.pitch_class for p in pitches)
    for label, template in _QUALITY_TEMPLATES:
        if len(pcs) != len(template):
            continue
        for root in range(12):
            if frozenset((pc - root) % 12 for pc in pcs) == template:
                return label
    return QUALITY_OTHER


def harmonic_quality_counts(c: Chorale) -> Counter:
    """Raw chord-quality counts over harmonic slices."""
    slices = harmonic_slices(c)
    if not slices:
        raise FeatureUndefinedError("no onset is covered by all four voices")
    return Counter(classify_quality(pitches) for _, pitches in slices)


def harmonic_quality_distribution(c: Chorale) -> Distribution:
    """Vertical quality usage over harmonic slices, reduced to quality only."""
    return Distribution.from_counts(CATEGORICAL, harmonic_quality_counts(c))


def parallel_error_counts(c: Chorale) -> Counter:
    """Raw counts of parallel fifth/octave/unison errors by kind.

    For every voice pair and every adjacent slice pair, an error fires when
    both voices change pitch and the (absolute) interval keeps the same
    chromatic residue of 7 (fifth) or 0 (unison/octave). Motion is similar
    when both voices move the same signed direction, contrary otherwise.
    A repeated interval without motion in both voices is not an error, so
    re-articulated chords never fire.
    """
    slices = harmonic_slices(c)
    counts: Counter = Counter()
    for hi in range(4):
        for lo in range(hi + 1, 4):
            for (_, before), (_, after) in zip(slices, slices[1:]):
                hi1, lo1 = before[hi].midi, before[lo].midi
                hi2, lo2 = after[hi].midi, after[lo].midi
                if hi1 == hi2 or lo1 == lo2:
                    continue
                i1 = abs(hi1 - lo1)
                i2 = abs(hi2 - lo2)
                residue = i1 % 12
                if residue != i2 % 12 or residue not in (0, 7):
                    continue
                similar = (hi2 > hi1) == (lo2 > lo1)
                if residue == 7:
                    kind = P5_SIMILAR if similar else P5_CONTRARY
                elif i1 == 0 and i2 == 0:
                    kind = P1_SIMILAR
                else:
                    kind = P8_SIMILAR if similar else P8_CONTRARY
                counts[kind] += 1
    return counts


def parallel_errors(c: Chorale) -> tuple[Distribution, int]:
    """Distribution over parallel-error kinds plus the raw error count.

    The distribution is empty exactly when the chorale is error-free.
    """
    counts = parallel_error_counts(c)
    return Distribution.from_counts(CATEGORICAL, counts), sum(counts.values())


@dataclass(frozen=True)
class RepeatedPattern:
    """A melodic token sequence occurring at least twice within one voice."""

    voice: str
    token_length: int
    quarter_length: Fraction
    occurrence_count: int
    occurrence_onsets: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.token_length < 2:
            raise ValueError("patterns need at least 2 tokens")
        if self.occurrence_count < 2 or self.occurrence_count != len(self.occurrence_onsets):
            raise ValueError("patterns need at least 2 occurrences")


def _voice_tokens(v: Voice) -> array:
    """Intern (octave-free pitch, duration) tokens to integer ids."""
    ids: dict[tuple[str, int, Fraction], int] = {}
    out = array("q")
    for ev in v.events:
        token = (ev.pitch.letter, ev.pitch.alter, ev.duration)
        out.append(ids.setdefault(token, len(ids)))
    return out


def find_repeated_patterns(v: Voice) -> list[RepeatedPattern]:
    """Repeated melodic sequences in one voice via the correlative matrix.

    Tokens are (spelled pitch without octave, duration) pairs. The matrix
    certifies every token substring of length >= 2 that recurs; occurrences
    are then counted leftmost-greedy without overlap, substrings needing at
    least two occurrences to survive. A pattern that is a substring of a
    longer pattern with the same occurrence count is suppressed as redundant.
    """
    if len(v) < 2:
        raise FeatureUndefinedError(f"{v.label}: need at least 2 events for patterns")
    tokens = _voice_tokens(v)
    max_lengths = _kernels.suffix_match_lengths(tokens)

    first_start: dict[tuple[int, ...], int] = {}
    for end, longest in enumerate(max_lengths):
        for length in range(2, longest + 1):
            start = end - length + 1
            key = tuple(tokens[start : end + 1])
            if key not in first_start:
                first_start[key] = start

    surviving: list[tuple[tuple[int, ...], list[int]]] = []
    for key, start in first_start.items():
        occs = _kernels.greedy_occurrences(tokens, start, len(key))
        if len(occs) >= 2:
            surviving.append((key, occs))

    def contains(longer: tuple[int, ...], shorter: tuple[int, ...]) -> bool:
        span = len(longer) - len(shorter)
        return any(longer[i : i + len(shorter)] == shorter for i in range(span + 1))

    kept = [
        (key, occs)
        for key, occs in surviving
        if not any(
            len(other) > len(key) and len(other_occs) == len(occs) and contains(other, key)
            for other, other_occs in surviving
        )
    ]

    patterns = []
    for key, occs in sorted(kept, key=lambda item: (item[1][0], len(item[0]))):
        length = len(key)
        quarter_length = sum(
            (v.events[occs[0] + k].duration for k in range(length)), Fraction(0)
        )
        patterns.append(
            RepeatedPattern(
                voice=v.label,
                token_length=length,
                quarter_length=quarter_length,
                occurrence_count=len(occs),
                occurrence_onsets=tuple(v.events[i].onset for i in occs),
            )
        )
    return patterns


def repeated_sequence_counts(c: Chorale) -> Counter:
    """Raw repeated-sequence length counts pooled over all voices.

    Each pattern contributes its quarter length once per occurrence. May be
    empty when the chorale repeats nothing.
    """
    counts: Counter = Counter()
    for voice in c.voices:
        for pattern in find_repeated_patterns(voice):
            counts[pattern.quarter_length] += pattern.occurrence_count
    return counts


def repeated_sequence_distribution(c: Chorale) -> Distribution:
    """Lengths (quarter units) of repeated sequences, pooled over all voices.

    A chorale with no repetition at all has no distribution here; callers
    grade that case with the profile's recorded fallback distance.
    """
    counts = repeated_sequence_counts(c)
    if not counts:
        raise FeatureUndefinedError("no repeated sequences in any voice")
    return Distribution.from_counts(NUMERIC, counts)
