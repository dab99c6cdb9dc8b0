"""Canonical JSON chorale format: exact, deterministic, diff-friendly.

Schema (all keys sorted, two-space indent, LF, UTF-8):

    {
      "id": "bwv-whatever",
      "key": {"mode": "major", "tonic": "Eb"},          # optional on input
      "voices": {
        "soprano": [{"dur": "1", "on": "0", "pitch": "C5"}, ...],
        "alto":    [...], "tenor": [...], "bass": [...]
      }
    }

Onsets and durations are exact rationals rendered as integer or "num/den"
strings, never decimals. Parsing a document written by this module and
writing it again is byte-identity.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .errors import ParseError
from .keydetect import detect_key
from .model import Chorale, Key, NoteEvent, SpelledPitch, Voice, VOICE_LABELS

MIN_NOTE_COUNT = 8

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "num" or "num/den", never a decimal."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str, path: str) -> Fraction:
    if not isinstance(text, str):
        raise ParseError(f"{path}: expected rational string, got {type(text).__name__}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ParseError(f"{path}: bad rational {text!r}")
    num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ParseError(f"{path}: zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def dump_canonical(obj: Any) -> bytes:
    """Deterministic JSON bytes: sorted keys, 2-space indent, trailing LF."""
    return (json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _require_keys(obj: dict, required: set[str], optional: set[str], path: str) -> None:
    missing = required - obj.keys()
    if missing:
        raise ParseError(f"{path}: missing keys {sorted(missing)}")
    extra = obj.keys() - required - optional
    if extra:
        raise ParseError(f"{path}: unexpected keys {sorted(extra)}")


def parse_canonical_json(document: bytes) -> Chorale:
    """Parse a canonical JSON chorale; detect the key when none is recorded."""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"$: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ParseError("$: expected an object")
    _require_keys(data, {"id", "voices"}, {"key"}, "$")
    if not isinstance(data["id"], str) or not data["id"]:
        raise ParseError("$.id: expected non-empty string")

    voices_obj = data["voices"]
    if not isinstance(voices_obj, dict):
        raise ParseError("$.voices: expected an object")
    _require_keys(voices_obj, set(VOICE_LABELS), set(), "$.voices")

    voices = []
    for label in VOICE_LABELS:
        events = []
        raw_events = voices_obj[label]
        if not isinstance(raw_events, list):
            raise ParseError(f"$.voices.{label}: expected a list")
        for idx, raw in enumerate(raw_events):
            path = f"$.voices.{label}[{idx}]"
            if not isinstance(raw, dict):
                raise ParseError(f"{path}: expected an object")
            _require_keys(raw, {"on", "dur", "pitch"}, set(), path)
            onset = parse_rational(raw["on"], f"{path}.on")
            duration = parse_rational(raw["dur"], f"{path}.dur")
            if onset < 0:
                raise ParseError(f"{path}.on: negative onset {raw['on']!r}")
            if duration <= 0:
                raise ParseError(f"{path}.dur: non-positive duration {raw['dur']!r}")
            try:
                pitch = SpelledPitch.parse(raw["pitch"])
            except (ValueError, TypeError) as exc:
                raise ParseError(f"{path}.pitch: {exc}") from None
            events.append(NoteEvent(onset, duration, pitch))
        try:
            voices.append(Voice(label, tuple(events)))
        except ValueError as exc:
            raise ParseError(f"$.voices.{label}: {exc}") from None

    note_count = sum(len(v) for v in voices)
    if note_count < MIN_NOTE_COUNT:
        raise ParseError(f"$.voices: degenerate input with {note_count} notes (< {MIN_NOTE_COUNT})")

    if "key" in data:
        key_obj = data["key"]
        if not isinstance(key_obj, dict):
            raise ParseError("$.key: expected an object")
        _require_keys(key_obj, {"tonic", "mode"}, set(), "$.key")
        try:
            key = Key.parse(key_obj["tonic"], key_obj["mode"])
        except (ValueError, TypeError) as exc:
            raise ParseError(f"$.key: {exc}") from None
    else:
        key = detect_key(voices)

    return Chorale(id=data["id"], voices=tuple(voices), key=key)


def write_canonical_json(c: Chorale) -> bytes:
    """Serialize a chorale deterministically; round-trip partner of the parser."""
    obj = {
        "id": c.id,
        "key": {"tonic": c.key.tonic_name(), "mode": c.key.mode},
        "voices": {
            voice.label: [
                {
                    "on": format_rational(ev.onset),
                    "dur": format_rational(ev.duration),
                    "pitch": str(ev.pitch),
                }
                for ev in voice.events
            ]
            for voice in c.voices
        },
    }
    return dump_canonical(obj)
