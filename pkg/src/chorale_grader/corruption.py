"""Deterministic pitch corruption: a stand-in for badly written chorales.

Each note is independently transposed, with the given probability, by one of
{-2, -1, +1, +2} semitones and respelled with the fewest accidentals (ties
prefer sharps). Rhythm is untouched, so rhythm-derived features are invariant
under corruption by construction. The random stream is seeded from the
chorale's canonical bytes plus rate and seed, so the same inputs always give
the same corrupted output, independent of platform or process.
"""

from __future__ import annotations

import hashlib
import random

from .canonical import write_canonical_json
from .keydetect import detect_key
from .model import Chorale, NoteEvent, Voice, spell_midi

_DELTAS = (-2, -1, 1, 2)


def corrupt(c: Chorale, rate: float, seed: int) -> Chorale:
    """Return a pitch-corrupted copy of the chorale; key is re-detected."""
    if not 0 < rate <= 1:
        raise ValueError(f"rate must lie in (0, 1], got {rate}")
    digest = hashlib.sha256(
        write_canonical_json(c) + f"|rate={rate!r}|seed={seed}".encode("ascii")
    ).digest()
    rng = random.Random(int.from_bytes(digest[:8], "big"))

    voices = []
    for voice in c.voices:
        events = []
        for ev in voice.events:
            if rng.random() < rate:
                delta = _DELTAS[rng.randrange(4)]
                pitch = spell_midi(ev.pitch.midi + delta)
                events.append(NoteEvent(ev.onset, ev.duration, pitch))
            else:
                events.append(ev)
        voices.append(Voice(voice.label, tuple(events)))

    key = detect_key(voices)
    corrupted_id = f"{c.id}~corrupt-r{rate:g}-s{seed}"
    return Chorale(id=corrupted_id, voices=tuple(voices), key=key)
