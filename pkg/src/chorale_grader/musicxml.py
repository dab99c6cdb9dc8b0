"""MusicXML ingestion for four-part chorales.

Supports the uncompressed score-partwise subset needed for grading: pitched
notes and rests, ties, divisions-based timing, key/time signatures, in-part
voice numbers with backup/forward, and 3:2 tuplets (whose sounding length is
already encoded in the duration element). Anything outside the subset raises
rather than being silently skipped; purely visual elements (stems, beams,
lyrics, dynamics) are ignored because no feature consumes them.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .canonical import MIN_NOTE_COUNT
from .errors import ParseError, UnsupportedFeatureError, VoiceCountError
from .keydetect import detect_key
from .model import Chorale, NoteEvent, SpelledPitch, Voice, VOICE_LABELS

# Note children that carry no timing or pitch information for our features.
_IGNORED_NOTE_CHILDREN = {
    "accidental", "beam", "dot", "instrument", "lyric", "notations",
    "notehead", "staff", "stem", "type", "voice", "pitch", "rest",
    "duration", "tie",
}

_IGNORED_MEASURE_CHILDREN = {
    "attributes", "backup", "barline", "direction", "forward", "harmony",
    "note", "print", "sound",
}


@dataclass
class RawNote:
    onset: Fraction
    duration: Fraction
    pitch: SpelledPitch
    tie_start: bool
    tie_stop: bool


@dataclass
class RawPart:
    part_id: str
    name: str
    # voice number -> notes in document order
    voices: dict[str, list[RawNote]] = field(default_factory=dict)


@dataclass
class RawScore:
    parts: list[RawPart]
    key_signature_fifths: Optional[int] = None
    title: str = ""


def _text(elem: Optional[ET.Element], default: str = "") -> str:
    return elem.text.strip() if elem is not None and elem.text else default


def _parse_pitch(note: ET.Element, where: str) -> SpelledPitch:
    pitch = note.find("pitch")
    if pitch is None:
        raise ParseError(f"{where}: note without pitch or rest")
    step = _text(pitch.find("step"))
    if step not in "CDEFGAB" or len(step) != 1:
        raise ParseError(f"{where}: bad step {step!r}")
    alter_text = _text(pitch.find("alter"), "0")
    try:
        alter_value = float(alter_text)
    except ValueError:
        raise ParseError(f"{where}: bad alter {alter_text!r}") from None
    if alter_value != int(alter_value):
        raise UnsupportedFeatureError(f"{where}: non-integer alter {alter_text!r}")
    alter = int(alter_value)
    if not -2 <= alter <= 2:
        raise ParseError(f"{where}: alteration {alter} outside [-2, 2]")
    octave_text = _text(pitch.find("octave"))
    try:
        octave = int(octave_text)
    except ValueError:
        raise ParseError(f"{where}: bad octave {octave_text!r}") from None
    return SpelledPitch(step, alter, octave)


def _check_note_supported(note: ET.Element, where: str) -> None:
    for child in note:
        tag = child.tag
        if tag == "grace":
            raise UnsupportedFeatureError(f"{where}: grace note")
        if tag == "chord":
            raise UnsupportedFeatureError(f"{where}: chord note (use in-part voices)")
        if tag == "cue":
            raise UnsupportedFeatureError(f"{where}: cue note")
        if tag == "unpitched":
            raise UnsupportedFeatureError(f"{where}: unpitched note")
        if tag == "time-modification":
            actual = _text(child.find("actual-notes"))
            normal = _text(child.find("normal-notes"))
            if (actual, normal) != ("3", "2"):
                raise UnsupportedFeatureError(f"{where}: tuplet {actual}:{normal}")
            continue
        if tag not in _IGNORED_NOTE_CHILDREN:
            raise UnsupportedFeatureError(f"{where}: note element <{tag}>")


def _read_duration(elem: ET.Element, divisions: Fraction, where: str) -> Fraction:
    duration_text = _text(elem.find("duration"))
    try:
        duration_div = int(duration_text)
    except ValueError:
        raise ParseError(f"{where}: bad duration {duration_text!r}") from None
    if duration_div <= 0:
        raise ParseError(f"{where}: non-positive duration {duration_div}")
    return Fraction(duration_div) / divisions


def parse_raw_score(document: bytes) -> RawScore:
    """Extract timed, spelled notes per (part, voice) without normalization."""
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise ParseError(f"malformed XML: {exc}") from None
    if root.tag != "score-partwise":
        raise UnsupportedFeatureError(f"root element <{root.tag}> (only score-partwise)")

    names: dict[str, str] = {}
    part_list = root.find("part-list")
    if part_list is not None:
        for score_part in part_list.iter("score-part"):
            names[score_part.get("id", "")] = _text(score_part.find("part-name"))

    score = RawScore(parts=[])
    score.title = _text(root.find("work/work-title")) or _text(root.find("movement-title"))
    for part in root.iter("part"):
        part_id = part.get("id", f"P{len(score.parts) + 1}")
        raw_part = RawPart(part_id=part_id, name=names.get(part_id, ""))
        divisions: Optional[Fraction] = None
        measure_start = Fraction(0)
        for mi, measure in enumerate(part.iter("measure")):
            where_measure = f"part {part_id} measure {measure.get('number', mi + 1)}"
            cursor = measure_start
            measure_end = measure_start
            for elem in measure:
                tag = elem.tag
                if tag not in _IGNORED_MEASURE_CHILDREN:
                    raise UnsupportedFeatureError(f"{where_measure}: element <{tag}>")
                if tag == "attributes":
                    div_text = _text(elem.find("divisions"))
                    if div_text:
                        if int(div_text) <= 0:
                            raise ParseError(f"{where_measure}: divisions {div_text}")
                        divisions = Fraction(int(div_text))
                    fifths_text = _text(elem.find("key/fifths"))
                    if fifths_text and score.key_signature_fifths is None:
                        fifths = int(fifths_text)
                        if not -7 <= fifths <= 7:
                            raise ParseError(f"{where_measure}: fifths {fifths} outside [-7, 7]")
                        score.key_signature_fifths = fifths
                elif tag in ("backup", "forward"):
                    if divisions is None:
                        raise ParseError(f"{where_measure}: {tag} before divisions")
                    delta = _read_duration(elem, divisions, f"{where_measure} {tag}")
                    cursor = cursor - delta if tag == "backup" else cursor + delta
                    if cursor < 0:
                        raise ParseError(f"{where_measure}: backup before measure start")
                elif tag == "note":
                    where = f"{where_measure} note"
                    _check_note_supported(elem, where)
                    if divisions is None:
                        raise ParseError(f"{where}: note before divisions")
                    duration = _read_duration(elem, divisions, where)
                    if elem.find("rest") is not None:
                        cursor += duration
                    else:
                        pitch = _parse_pitch(elem, where)
                        ties = {t.get("type") for t in elem.findall("tie")}
                        voice_number = _text(elem.find("voice"), "1")
                        raw_part.voices.setdefault(voice_number, []).append(
                            RawNote(
                                onset=cursor,
                                duration=duration,
                                pitch=pitch,
                                tie_start="start" in ties,
                                tie_stop="stop" in ties,
                            )
                        )
                        cursor += duration
                    measure_end = max(measure_end, cursor)
            measure_start = max(measure_end, cursor)
        score.parts.append(raw_part)
    return score


def _merge_ties(notes: list[RawNote], where: str) -> list[NoteEvent]:
    """Collapse tied note groups into single events; total duration is conserved."""
    events: list[NoteEvent] = []
    pending: Optional[RawNote] = None
    for note in notes:
        if pending is not None:
            if (
                note.tie_stop
                and note.pitch == pending.pitch
                and pending.onset + pending.duration == note.onset
            ):
                pending = RawNote(
                    onset=pending.onset,
                    duration=pending.duration + note.duration,
                    pitch=note.pitch,
                    tie_start=note.tie_start,
                    tie_stop=False,
                )
                if not pending.tie_start:
                    events.append(NoteEvent(pending.onset, pending.duration, pending.pitch))
                    pending = None
                continue
            raise ParseError(f"{where}: dangling tie at onset {pending.onset}")
        if note.tie_stop:
            raise ParseError(f"{where}: tie stop without start at onset {note.onset}")
        if note.tie_start:
            pending = note
        else:
            events.append(NoteEvent(note.onset, note.duration, note.pitch))
    if pending is not None:
        raise ParseError(f"{where}: unterminated tie at onset {pending.onset}")
    return events


def _voice_order_key(voice_number: str) -> tuple[int, str]:
    return (int(voice_number), "") if voice_number.isdigit() else (1 << 30, voice_number)


def parse_musicxml(document: bytes, default_id: str = "untitled") -> Chorale:
    """Parse an uncompressed MusicXML document into a chorale.

    Parts map to SATB by case-insensitive part-name match when the document
    has four single-voice parts named soprano/alto/tenor/bass (in any order);
    otherwise streams are assigned top-to-bottom in (part, voice-number)
    order. The key is always re-detected from the notes; an explicit key
    signature only influences tonic spelling.
    """
    score = parse_raw_score(document)

    streams: list[tuple[str, list[RawNote]]] = []
    for raw_part in score.parts:
        for voice_number in sorted(raw_part.voices, key=_voice_order_key):
            streams.append((raw_part.name, raw_part.voices[voice_number]))
    if len(streams) != 4:
        raise VoiceCountError(f"expected 4 voices after voice-splitting, got {len(streams)}")

    order = list(range(4))
    lowered = [name.strip().lower() for name, _ in streams]
    single_voice_parts = len(score.parts) == 4
    if single_voice_parts and sorted(lowered) == sorted(VOICE_LABELS):
        order = [lowered.index(label) for label in VOICE_LABELS]

    voices = []
    for label, stream_index in zip(VOICE_LABELS, order):
        name, notes = streams[stream_index]
        events = _merge_ties(notes, f"voice {label!r} (part name {name!r})")
        try:
            voices.append(Voice(label, tuple(events)))
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    note_count = sum(len(v) for v in voices)
    if note_count < MIN_NOTE_COUNT:
        raise ParseError(f"degenerate input with {note_count} notes (< {MIN_NOTE_COUNT})")

    key = detect_key(voices, score.key_signature_fifths)
    return Chorale(id=score.title or default_id, voices=tuple(voices), key=key)
