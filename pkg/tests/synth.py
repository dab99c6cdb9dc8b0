"""Deterministic generator of plausible four-part chorales for tests.

Not a composer of art: a rule-based writer that produces corpora with the
statistical fingerprints the grader cares about. Chorales differ in key,
mode, phrase structure, and melody, while sharing corpus-wide habits (step
density, leap frequency, rhythm mix) so that a profile pooled from them is
tight. Phrases repeat (AAB-style forms), voices follow chord tones with
smooth voice leading, and parallel fifths/octaves are avoided except for a
small deliberately flawed minority so corpus error ratios are positive.

Everything is driven by one ``random.Random(seed)``, so the same seed always
yields byte-identical corpora.
"""

from __future__ import annotations

import random
from fractions import Fraction

from chorale_grader.model import (
    Chorale,
    Key,
    LETTERS,
    LETTER_INDEX,
    LETTER_PC,
    NoteEvent,
    SpelledPitch,
    Voice,
    VOICE_LABELS,
    diatonic_alter,
)

# (midi_low, midi_high, preferred_center)
_RANGES = {
    "soprano": (60, 81, 72),
    "alto": (55, 76, 65),
    "tenor": (48, 69, 59),
    "bass": (40, 64, 50),
}

_KEYS = [
    ("C", 0, "major"),
    ("G", 0, "major"),
    ("D", 0, "major"),
    ("F", 0, "major"),
    ("B", -1, "major"),
    ("E", -1, "major"),
    ("A", 0, "major"),
    ("A", 0, "minor"),
    ("E", 0, "minor"),
    ("D", 0, "minor"),
    ("G", 0, "minor"),
    ("B", 0, "minor"),
]

# Chords as (degree, extra_alter) tone lists; first tone is the root. The
# extra alteration rides on top of the mode's diatonic scale, so minor-mode
# dominants carry the raised leading tone and V/V carries a raised fourth.
_MAJOR_CHORDS = {
    "I": ((1, 0), (3, 0), (5, 0)),
    "ii": ((2, 0), (4, 0), (6, 0)),
    "IV": ((4, 0), (6, 0), (1, 0)),
    "V": ((5, 0), (7, 0), (2, 0)),
    "V7": ((5, 0), (7, 0), (2, 0), (4, 0)),
    "V/V": ((2, 0), (4, 1), (6, 0)),
    "vi": ((6, 0), (1, 0), (3, 0)),
}
_MAJOR_MOVES = {
    "I": ("IV", "V", "vi", "ii", "V/V", "IV"),
    "ii": ("V", "V7"),
    "IV": ("V", "ii"),
    "V": ("I", "vi"),
    "V7": ("I",),
    "V/V": ("V",),
    "vi": ("IV", "ii"),
}
_MINOR_CHORDS = {
    "i": ((1, 0), (3, 0), (5, 0)),
    "iv": ((4, 0), (6, 0), (1, 0)),
    "V": ((5, 0), (7, 1), (2, 0)),
    "V7": ((5, 0), (7, 1), (2, 0), (4, 0)),
    "VI": ((6, 0), (1, 0), (3, 0)),
}
_MINOR_MOVES = {
    "i": ("iv", "VI", "V", "V7"),
    "iv": ("V", "V7"),
    "V": ("i", "VI"),
    "V7": ("i",),
    "VI": ("iv", "V"),
}

_CADENCES = {"major": ("V", "I"), "minor": ("V", "i")}

# Corpus-wide habits; per-chorale deviations stay hair-thin so the pooled
# profile is a tight reference for every member.
_EIGHTH_RATE = 0.25
_WANDER_RATE = 0.17


def _scale_pitch(key: Key, degree: int, extra_alter: int, octave_hint: int) -> SpelledPitch:
    letter = LETTERS[(LETTER_INDEX[key.tonic_letter] + degree - 1) % 7]
    alter = diatonic_alter(letter, key) + extra_alter
    return SpelledPitch(letter, alter, octave_hint)


def _tone_candidates(key: Key, tone: tuple[int, int], low: int, high: int) -> list[SpelledPitch]:
    out = []
    for octave in range(1, 7):
        p = _scale_pitch(key, tone[0], tone[1], octave)
        if low <= p.midi <= high:
            out.append(p)
    return out


def _has_parallel(prev: list[int], cur: list[int]) -> bool:
    for hi in range(4):
        for lo in range(hi + 1, 4):
            if prev[hi] == cur[hi] or prev[lo] == cur[lo]:
                continue
            i1 = abs(prev[hi] - prev[lo])
            i2 = abs(cur[hi] - cur[lo])
            if i1 % 12 == i2 % 12 and i1 % 12 in (0, 7):
                return True
    return False


class _Personality:
    """Per-chorale structure choices; melodic habits stay corpus-wide."""

    def __init__(self, rng: random.Random):
        self.phrase_len = rng.randint(7, 8)
        self.form = rng.choice(
            (
                ("A", "A", "B", "C", "A"),
                ("A", "B", "A", "B", "C"),
                ("A", "A", "B", "C", "B"),
            )
        )
        self.inject_parallel = rng.random() < 0.15


def _progression(rng: random.Random, mode: str, length: int) -> list[str]:
    moves = _MAJOR_MOVES if mode == "major" else _MINOR_MOVES
    dominant, tonic = _CADENCES[mode]
    cur = tonic
    out = [cur]
    for _ in range(max(1, length - 2)):
        cur = rng.choice(moves[cur])
        out.append(cur)
    if out[-1] not in (dominant, "V7"):
        out.append(dominant)
    out.append(tonic)
    return out


def _covered_tones(key: Key, chord, pitches: list[SpelledPitch]) -> set[int]:
    used = set()
    for p in pitches:
        for ti, tone in enumerate(chord):
            ref = _scale_pitch(key, tone[0], tone[1], p.octave)
            if (ref.letter, ref.alter) == (p.letter, p.alter):
                used.add(ti)
    return used


def _voice_chord(
    rng: random.Random,
    key: Key,
    chord: tuple[tuple[int, int], ...],
    prev: list[SpelledPitch] | None,
    wander: bool,
) -> list[SpelledPitch]:
    """Assign SATB pitches for one chord, avoiding parallels with the previous."""

    def attempt(jitter: bool) -> list[SpelledPitch]:
        pitches: list[SpelledPitch] = []
        for vi, label in enumerate(VOICE_LABELS):
            low, high, center = _RANGES[label]
            target = center if prev is None else prev[vi].midi
            if jitter:
                target += rng.choice((-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5))
            if label == "bass":
                tones = [chord[0]]
            elif label == "soprano":
                tones = list(chord)
                if wander and prev is not None:
                    target += rng.choice((-4, -3, 3, 4))
            else:
                used = _covered_tones(key, chord, pitches)
                missing = [t for ti, t in enumerate(chord) if ti not in used]
                tones = missing if missing else list(chord)
                if label == "tenor":
                    # Completing the chord at any cost makes the leftover
                    # voice erratic; allow a root doubling instead.
                    tones = tones + [chord[0]]
                if jitter and rng.random() < 0.3:
                    tones = list(chord)
            candidates = [c for t in tones for c in _tone_candidates(key, t, low, high)]
            best = min(candidates, key=lambda p: (abs(p.midi - target), p.midi))
            pitches.append(best)
        return pitches

    cand = attempt(jitter=False)
    if prev is None:
        return cand
    prev_midi = [p.midi for p in prev]
    for _ in range(120):
        if not _has_parallel(prev_midi, [p.midi for p in cand]):
            return cand
        cand = attempt(jitter=True)
    # Freeze the inner voices on their previous pitches: an unmoved voice
    # cannot commit a parallel; if soprano-bass still clash, freeze soprano
    # too and let the bass move alone.
    cand = [cand[0], prev[1], prev[2], cand[3]]
    if _has_parallel(prev_midi, [p.midi for p in cand]):
        cand = [prev[0], prev[1], prev[2], cand[3]]
    return cand


def _force_fifth_below_soprano(s: SpelledPitch) -> SpelledPitch | None:
    """Spell the pitch a perfect fifth below the given soprano note."""
    target = s.midi - 7
    for letter, natural in LETTER_PC.items():
        for octave in (s.octave, s.octave - 1):
            alter = target - natural - 12 * (octave + 1)
            if -1 <= alter <= 1:
                return SpelledPitch(letter, alter, octave)
    return None


def _new_error_count(voicings: list[list[SpelledPitch]], at: int) -> int:
    """Parallel errors on the transitions touching chords at and at+1."""
    count = 0
    for i in range(max(0, at - 1), min(len(voicings) - 1, at + 2)):
        a = [p.midi for p in voicings[i]]
        b = [p.midi for p in voicings[i + 1]]
        for hi in range(4):
            for lo in range(hi + 1, 4):
                if a[hi] == b[hi] or a[lo] == b[lo]:
                    continue
                i1 = abs(a[hi] - a[lo])
                i2 = abs(b[hi] - b[lo])
                if i1 % 12 == i2 % 12 and i1 % 12 in (0, 7):
                    count += 1
    return count


def _inject_parallel_fifths(rng: random.Random, voicings: list[list[SpelledPitch]]) -> None:
    """Force one soprano-alto parallel fifth, and nothing else, if possible.

    Spots where the forced alto would create collateral errors on the
    surrounding transitions are rejected, so a flawed chorale carries exactly
    the intended error per phrase occurrence.
    """
    low, high, _ = _RANGES["alto"]
    spots = list(range(1, len(voicings) - 2))
    rng.shuffle(spots)
    for at in spots:
        if voicings[at][0].midi == voicings[at + 1][0].midi:
            continue
        forced = []
        for idx in (at, at + 1):
            f = _force_fifth_below_soprano(voicings[idx][0])
            if f is not None and low <= f.midi <= high:
                forced.append(f)
        if len(forced) != 2:
            continue
        saved = (voicings[at][1], voicings[at + 1][1])
        voicings[at][1], voicings[at + 1][1] = forced
        if _new_error_count(voicings, at) == 1:
            return
        voicings[at][1], voicings[at + 1][1] = saved


def _realize_phrase(
    rng: random.Random,
    key: Key,
    personality: _Personality,
    numerals: list[str],
    prev: list[SpelledPitch] | None,
    anchor: list[SpelledPitch] | None,
) -> tuple[list[list[tuple[SpelledPitch, Fraction]]], list[SpelledPitch]]:
    """Realize a chord list into per-voice (pitch, duration) sequences."""
    chords = _MAJOR_CHORDS if key.mode == "major" else _MINOR_CHORDS

    # Fix the exact number of wandering beats so melodic dispersion does not
    # fluctuate binomially from chorale to chorale.
    interior = list(range(1, len(numerals) - 1))
    wander_count = max(1, round(_WANDER_RATE * len(interior)))
    wander_beats = set(rng.sample(interior, min(wander_count, len(interior))))

    voicings: list[list[SpelledPitch]] = []
    for ci, numeral in enumerate(numerals):
        if ci == len(numerals) - 1 and anchor is not None:
            # Every phrase cadences onto the same anchor voicing so any
            # phrase-to-phrase adjacency in the form equals the one vetted
            # transition (anchor -> phrase opening).
            for _ in range(200):
                if not _has_parallel([p.midi for p in voicings[-1]], [p.midi for p in anchor]):
                    break
                voicings[-1] = _voice_chord(
                    rng, key, chords[numerals[ci - 1]], voicings[-2] if ci >= 2 else None, False
                )
            voicings.append(list(anchor))
            break
        voicings.append(_voice_chord(rng, key, chords[numeral], prev, ci in wander_beats))
        prev = voicings[-1]

    if personality.inject_parallel and len(voicings) >= 4:
        _inject_parallel_fifths(rng, voicings)

    lines: list[list[tuple[SpelledPitch, Fraction]]] = [[] for _ in VOICE_LABELS]
    for ci, voicing in enumerate(voicings):
        dur = Fraction(2) if ci == len(voicings) - 1 else Fraction(1)
        for vi in range(4):
            lines[vi].append((voicing[vi], dur))

    # Decorate stepwise-fillable thirds with passing eighth notes; again a
    # fixed fraction of the eligible beats rather than per-beat coin flips.
    # A fill is vetoed when the passing tone would itself form consecutive
    # fifths/octaves against another voice at the offbeat transition, and
    # soprano and tenor never fill the same beat.
    def _passing_for(pitch: SpelledPitch, nxt: SpelledPitch) -> SpelledPitch:
        step = 1 if nxt.midi > pitch.midi else -1
        mid_idx = (LETTER_INDEX[pitch.letter] + step) % 7
        mid_letter = LETTERS[mid_idx]
        octave = pitch.octave
        if step > 0 and mid_idx < LETTER_INDEX[pitch.letter]:
            octave += 1
        if step < 0 and mid_idx > LETTER_INDEX[pitch.letter]:
            octave -= 1
        return SpelledPitch(mid_letter, diatonic_alter(mid_letter, key), octave)

    def _fill_safe(vi: int, i: int, passing: SpelledPitch) -> bool:
        target = voicings[i + 1][vi]
        for u in range(4):
            if u == vi:
                continue
            other_now = voicings[i][u]
            other_next = voicings[i + 1][u]
            if other_now.midi == other_next.midi or passing.midi == target.midi:
                continue
            i1 = abs(passing.midi - other_now.midi)
            i2 = abs(target.midi - other_next.midi)
            if i1 % 12 == i2 % 12 and i1 % 12 in (0, 7):
                return False
        return True

    taken: set[int] = set()
    for vi, label in enumerate(VOICE_LABELS):
        if label not in ("soprano", "tenor"):
            continue
        line = lines[vi]
        eligible = []
        for i, (pitch, dur) in enumerate(line[:-1]):
            nxt = line[i + 1][0]
            if (
                dur == 1
                and i not in taken
                and abs(nxt.midi - pitch.midi) in (3, 4)
                and abs(LETTER_INDEX[nxt.letter] - LETTER_INDEX[pitch.letter]) in (2, 5)
                and _fill_safe(vi, i, _passing_for(pitch, nxt))
            ):
                eligible.append(i)
        fill_count = round(_EIGHTH_RATE * len(eligible) * 2)
        fills = set(rng.sample(eligible, min(fill_count, len(eligible))))
        taken |= fills
        decorated: list[tuple[SpelledPitch, Fraction]] = []
        for i, (pitch, dur) in enumerate(line):
            if i in fills:
                passing = _passing_for(pitch, line[i + 1][0])
                decorated.append((pitch, Fraction(1, 2)))
                decorated.append((passing, Fraction(1, 2)))
            else:
                decorated.append((pitch, dur))
        lines[vi] = decorated

    return lines, voicings[-1]


def make_chorale(seed: int, index: int) -> Chorale:
    """One deterministic chorale; (seed, index) fully determines the output."""
    rng = random.Random((seed, index))
    letter, alter, mode = _KEYS[index % len(_KEYS)]
    key = Key(letter, alter, mode)
    personality = _Personality(rng)

    phrase_chords = {
        name: _progression(rng, mode, personality.phrase_len)
        for name in sorted(set(personality.form))
    }
    chords = _MAJOR_CHORDS if mode == "major" else _MINOR_CHORDS
    tonic_chord = chords[_CADENCES[mode][1]]
    anchor = _voice_chord(rng, key, tonic_chord, None, False)

    realized: dict[str, list[list[tuple[SpelledPitch, Fraction]]]] = {}
    for name in sorted(phrase_chords):
        realized[name], _ = _realize_phrase(
            rng, key, personality, phrase_chords[name], anchor, anchor
        )

    voices = []
    for vi, label in enumerate(VOICE_LABELS):
        events = []
        t = Fraction(0)
        for name in personality.form:
            for pitch, dur in realized[name][vi]:
                events.append(NoteEvent(t, dur, pitch))
                t += dur
        voices.append(Voice(label, tuple(events)))

    return Chorale(id=f"synth-{seed}-{index:03d}", voices=tuple(voices), key=key)


def make_corpus(count: int = 30, seed: int = 20260810) -> list[Chorale]:
    """A deterministic corpus of plausible chorales."""
    return [make_chorale(seed, i) for i in range(count)]
