"""Krumhansl-Schmuckler key finding over duration-weighted pitch classes."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional

from .model import (
    Key,
    LETTER_FIFTHS,
    LETTER_PC,
    MAJOR,
    MINOR,
    Voice,
)

# Krumhansl-Kessler probe-tone profiles, indexed from the tonic.
_PROFILE = {
    MAJOR: (6.35, 2.23, 3.48, 2.33, 4.38, 4.09, 2.52, 5.19, 2.39, 3.66, 2.29, 2.88),
    MINOR: (6.33, 2.68, 3.52, 5.38, 2.60, 3.53, 2.54, 4.75, 3.98, 2.69, 3.34, 3.17),
}


def _correlation(weights: list[float], profile: tuple[float, ...], tonic: int) -> float:
    """Pearson correlation of the weight vector with the profile rotated to tonic."""
    n = 12
    mean_w = sum(weights) / n
    mean_p = sum(profile) / n
    num = 0.0
    var_w = 0.0
    var_p = 0.0
    for pc in range(n):
        dw = weights[pc] - mean_w
        dp = profile[(pc - tonic) % n] - mean_p
        num += dw * dp
        var_w += dw * dw
        var_p += dp * dp
    if var_w == 0.0:
        return 0.0
    return num / math.sqrt(var_w * var_p)


def _spell_tonic(pc: int, mode: str, signature_fifths: Optional[int]) -> tuple[str, int]:
    """Choose a spelling for the winning tonic pitch class.

    With a key signature, prefer the enharmonic spelling on the signature's
    side of the circle of fifths; otherwise prefer the key with the smaller
    signature, breaking the F#/Gb-style tie toward sharps.
    """
    candidates: list[tuple[tuple[int, int], tuple[str, int]]] = []
    for letter, natural in LETTER_PC.items():
        alter = (pc - natural + 6) % 12 - 6
        if not -1 <= alter <= 1:
            continue
        fifths = LETTER_FIFTHS[letter] + 7 * alter
        if mode == MINOR:
            fifths -= 3
        if signature_fifths:
            tie_rank = 0 if (fifths > 0) == (signature_fifths > 0) else 1
        else:
            tie_rank = 0 if fifths > 0 else 1
        candidates.append(((abs(fifths), tie_rank), (letter, alter)))
    return min(candidates)[1]


def detect_key(voices: Iterable[Voice], key_signature_fifths: Optional[int] = None) -> Key:
    """Best-correlating key for the voices' duration-weighted pitch classes.

    Scans all 24 major/minor keys; exact correlation ties prefer major mode,
    then the lower tonic pitch class. The key signature, when given, only
    influences how the tonic is spelled, never which key wins.
    """
    exact = [Fraction(0)] * 12
    for voice in voices:
        for ev in voice.events:
            exact[ev.pitch.pitch_class] += ev.duration
    weights = [float(w) for w in exact]

    best_mode = MAJOR
    best_pc = 0
    best_r = -math.inf
    for mode in (MAJOR, MINOR):
        for pc in range(12):
            r = _correlation(weights, _PROFILE[mode], pc)
            if r > best_r:
                best_r = r
                best_mode = mode
                best_pc = pc

    letter, alter = _spell_tonic(best_pc, best_mode, key_signature_fifths)
    return Key(letter, alter, best_mode)
