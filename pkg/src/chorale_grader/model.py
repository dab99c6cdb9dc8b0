"""Immutable score model: spelled pitches, keys, scale degrees, notes, voices, chorales.

Everything here is a frozen dataclass validated at construction, so instances
are safe to hash, share across threads, and use as dictionary keys. Time is
kept as exact `Fraction` quarter-note units throughout; converting onsets to
floats anywhere upstream would break slice alignment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

LETTERS = ("C", "D", "E", "F", "G", "A", "B")
LETTER_INDEX = {letter: i for i, letter in enumerate(LETTERS)}

# Chromatic position of each natural letter within the octave.
LETTER_PC = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}

# Position of each natural letter on the line of fifths (C = 0).
LETTER_FIFTHS = {"F": -1, "C": 0, "G": 1, "D": 2, "A": 3, "E": 4, "B": 5}

VOICE_LABELS = ("soprano", "alto", "tenor", "bass")

MAJOR = "major"
MINOR = "minor"
MODES = (MAJOR, MINOR)

# Semitone offsets of the diatonic scale from the tonic. The minor reference
# is the natural minor; raised sixths and sevenths surface as accidentals.
MODE_STEPS = {
    MAJOR: (0, 2, 4, 5, 7, 9, 11),
    MINOR: (0, 2, 3, 5, 7, 8, 10),
}

_PITCH_RE = re.compile(r"^([A-G])(#{1,2}|b{1,2})?(-?\d+)$")
_TONIC_RE = re.compile(r"^([A-G])(#|b)?$")


def _accidental_string(alter: int) -> str:
    return "#" * alter if alter >= 0 else "b" * (-alter)


@dataclass(frozen=True, order=True)
class SpelledPitch:
    """A pitch with explicit letter spelling; F#4 and Gb4 compare unequal."""

    letter: str
    alter: int
    octave: int

    def __post_init__(self) -> None:
        if self.letter not in LETTER_INDEX:
            raise ValueError(f"bad pitch letter {self.letter!r}")
        if not -2 <= self.alter <= 2:
            raise ValueError(f"alteration {self.alter} outside [-2, 2]")

    @property
    def midi(self) -> int:
        """Chromatic MIDI number; C4 = 60, total over all spellings."""
        return LETTER_PC[self.letter] + self.alter + 12 * (self.octave + 1)

    @property
    def pitch_class(self) -> int:
        return self.midi % 12

    def __str__(self) -> str:
        return f"{self.letter}{_accidental_string(self.alter)}{self.octave}"

    @classmethod
    def parse(cls, text: str) -> "SpelledPitch":
        """Parse strings like ``C4``, ``F#3``, ``Bb5``, ``C##2``."""
        m = _PITCH_RE.match(text)
        if m is None:
            raise ValueError(f"bad pitch string {text!r}")
        letter, acc, octave = m.groups()
        alter = 0 if acc is None else (len(acc) if acc[0] == "#" else -len(acc))
        return cls(letter, alter, int(octave))


@dataclass(frozen=True)
class Key:
    """Tonal reference frame: a spelled tonic (no octave) plus mode."""

    tonic_letter: str
    tonic_alter: int
    mode: str

    def __post_init__(self) -> None:
        if self.tonic_letter not in LETTER_INDEX:
            raise ValueError(f"bad tonic letter {self.tonic_letter!r}")
        if not -1 <= self.tonic_alter <= 1:
            raise ValueError(f"tonic alteration {self.tonic_alter} outside [-1, 1]")
        if self.mode not in MODES:
            raise ValueError(f"bad mode {self.mode!r}")

    @property
    def tonic_pc(self) -> int:
        return (LETTER_PC[self.tonic_letter] + self.tonic_alter) % 12

    @property
    def signature_fifths(self) -> int:
        """Key-signature position on the circle of fifths (sharps > 0)."""
        fifths = LETTER_FIFTHS[self.tonic_letter] + 7 * self.tonic_alter
        return fifths if self.mode == MAJOR else fifths - 3

    def tonic_name(self) -> str:
        return f"{self.tonic_letter}{_accidental_string(self.tonic_alter)}"

    def __str__(self) -> str:
        return f"{self.tonic_name()} {self.mode}"

    @classmethod
    def parse(cls, tonic: str, mode: str) -> "Key":
        m = _TONIC_RE.match(tonic)
        if m is None:
            raise ValueError(f"bad tonic string {tonic!r}")
        letter, acc = m.groups()
        alter = 0 if acc is None else (1 if acc == "#" else -1)
        return cls(letter, alter, mode)


_DEGREE_LABEL_RE = re.compile(r"^(#{1,2}|b{1,2})?([1-7])$")


@dataclass(frozen=True)
class ScaleDegree:
    """Position relative to a key's tonic, with spelling-aware accidental.

    The identity is ordered-categorical: degree (4, +1) and (5, -1) sound
    alike but compare unequal, preserving enharmonic distinctions.
    """

    degree: int
    accidental: int

    def __post_init__(self) -> None:
        if not 1 <= self.degree <= 7:
            raise ValueError(f"degree {self.degree} outside [1, 7]")
        if not -2 <= self.accidental <= 2:
            raise ValueError(f"degree accidental {self.accidental} outside [-2, 2]")

    @property
    def label(self) -> str:
        return f"{_accidental_string(self.accidental)}{self.degree}"

    def __str__(self) -> str:
        return self.label

    @classmethod
    def parse(cls, text: str) -> "ScaleDegree":
        m = _DEGREE_LABEL_RE.match(text)
        if m is None:
            raise ValueError(f"bad scale degree label {text!r}")
        acc, degree = m.groups()
        alter = 0 if acc is None else (len(acc) if acc[0] == "#" else -len(acc))
        return cls(int(degree), alter)


@dataclass(frozen=True)
class NoteEvent:
    """A sounded note: exact rational onset and duration in quarter units."""

    onset: Fraction
    duration: Fraction
    pitch: SpelledPitch

    def __post_init__(self) -> None:
        if not isinstance(self.onset, Fraction) or not isinstance(self.duration, Fraction):
            object.__setattr__(self, "onset", Fraction(self.onset))
            object.__setattr__(self, "duration", Fraction(self.duration))
        if self.onset < 0:
            raise ValueError(f"negative onset {self.onset}")
        if self.duration <= 0:
            raise ValueError(f"non-positive duration {self.duration}")

    @property
    def end(self) -> Fraction:
        return self.onset + self.duration


@dataclass(frozen=True)
class Voice:
    """One SATB part: an ordered, non-overlapping sequence of note events."""

    label: str
    events: tuple[NoteEvent, ...]

    def __post_init__(self) -> None:
        if self.label not in VOICE_LABELS:
            raise ValueError(f"bad voice label {self.label!r}")
        if not isinstance(self.events, tuple):
            object.__setattr__(self, "events", tuple(self.events))
        for prev, cur in zip(self.events, self.events[1:]):
            if cur.onset < prev.end:
                raise ValueError(
                    f"{self.label}: event at {cur.onset} overlaps previous ending {prev.end}"
                )

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class Chorale:
    """A four-part chorale with an analyzed key; the unit of grading."""

    id: str
    voices: tuple[Voice, ...]
    key: Key

    def __post_init__(self) -> None:
        if not isinstance(self.voices, tuple):
            object.__setattr__(self, "voices", tuple(self.voices))
        labels = tuple(v.label for v in self.voices)
        if labels != VOICE_LABELS:
            raise ValueError(f"expected one voice per SATB label in order, got {labels}")

    def voice(self, label: str) -> Voice:
        return self.voices[VOICE_LABELS.index(label)]

    @property
    def note_count(self) -> int:
        return sum(len(v) for v in self.voices)

    @property
    def total_quarters(self) -> Fraction:
        return max((ev.end for v in self.voices for ev in v.events), default=Fraction(0))


def midi(p: SpelledPitch) -> int:
    """Chromatic number of a spelled pitch (C4 = 60)."""
    return p.midi


def directed_interval(a: SpelledPitch, b: SpelledPitch) -> int:
    """Signed semitone distance from a to b; ascending positive."""
    return b.midi - a.midi


def diatonic_alter(letter: str, key: Key) -> int:
    """Alteration the key's diatonic scale applies to the given letter.

    E.g. in C# major the letter B carries +1 (B#); in F major B carries -1.
    """
    step = (LETTER_INDEX[letter] - LETTER_INDEX[key.tonic_letter]) % 7
    wanted_pc = (key.tonic_pc + MODE_STEPS[key.mode][step]) % 12
    return (wanted_pc - LETTER_PC[letter] + 6) % 12 - 6


def scale_degree(p: SpelledPitch, key: Key) -> ScaleDegree:
    """Scale degree of a pitch in a key, octave-invariant, spelling-aware.

    The degree comes from letter arithmetic; the accidental is the chromatic
    offset from the diatonic pitch at that degree (natural minor in minor
    keys, so leading tones surface as #7).
    """
    step = (LETTER_INDEX[p.letter] - LETTER_INDEX[key.tonic_letter]) % 7
    return ScaleDegree(step + 1, p.alter - diatonic_alter(p.letter, key))


def spell_midi(midi_number: int) -> SpelledPitch:
    """Respell a chromatic number with the fewest accidentals (ties prefer sharps)."""
    pc = midi_number % 12
    best: SpelledPitch | None = None
    best_rank: tuple[int, int] | None = None
    for letter, natural in LETTER_PC.items():
        alter = (pc - natural + 6) % 12 - 6
        if not -2 <= alter <= 2:
            continue
        rank = (abs(alter), 0 if alter >= 0 else 1)
        if best_rank is None or rank < best_rank:
            octave = (midi_number - alter - natural) // 12 - 1
            best = SpelledPitch(letter, alter, octave)
            best_rank = rank
    assert best is not None
    return best


def transpose_pitch(p: SpelledPitch, letter_steps: int, semitones: int) -> SpelledPitch:
    """Transpose preserving spelling logic (e.g. a perfect fifth is 4 letters, 7 semitones)."""
    new_index = LETTER_INDEX[p.letter] + letter_steps
    new_letter = LETTERS[new_index % 7]
    octave = p.octave + new_index // 7
    target_midi = p.midi + semitones
    alter = target_midi - (LETTER_PC[new_letter] + 12 * (octave + 1))
    if not -2 <= alter <= 2:
        raise ValueError(f"transposition of {p} needs alteration {alter}")
    return SpelledPitch(new_letter, alter, octave)
