"""Brightness and quarter-turn rotation attacks."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

import numpy as np

from .image import check_gray, from_real, round_half_away


class BrightnessMode(str, enum.Enum):
    ADDITIVE = "additive"
    MULTIPLICATIVE = "multiplicative"


class AttackKind(str, enum.Enum):
    BRIGHTNESS = "brightness"
    ROTATION = "rotation"


def attack_brightness(img, level: float, mode: BrightnessMode | str = BrightnessMode.ADDITIVE) -> np.ndarray:
    """Shift by ``level * 255`` (additive) or scale by ``1 + level`` (multiplicative).

    The additive offset is rounded (half away from zero) before it is applied,
    so unclipped pixels move by exactly ``round(255 * level)``.
    """
    if not -1.0 <= level <= 1.0:
        raise ValueError(f"brightness level {level} outside [-1, 1]")
    mode = BrightnessMode(mode)
    pixels = check_gray(img).astype(np.float64)
    if mode is BrightnessMode.ADDITIVE:
        out = pixels + round_half_away(level * 255.0)
    else:
        out = pixels * (1.0 + level)
    return from_real(out)


def attack_rotate(img, quarter_turns: int) -> np.ndarray:
    """Rotate clockwise by ``90 * quarter_turns`` degrees without resampling.

    One turn sends input (r, c) to output (c, H - 1 - r).
    """
    if quarter_turns not in (1, 2, 3):
        raise ValueError("only quarter turns supported (1, 2 or 3 clockwise turns)")
    return np.ascontiguousarray(np.rot90(check_gray(img), -quarter_turns))


@dataclass(frozen=True)
class AttackSpec:
    kind: AttackKind
    level: float = 0.0
    mode: BrightnessMode = BrightnessMode.ADDITIVE
    quarter_turns: int = 0

    @classmethod
    def brightness(cls, level: float, mode: BrightnessMode | str = BrightnessMode.ADDITIVE) -> "AttackSpec":
        if not -1.0 <= level <= 1.0:
            raise ValueError(f"brightness level {level} outside [-1, 1]")
        return cls(AttackKind.BRIGHTNESS, level=level, mode=BrightnessMode(mode))

    @classmethod
    def rotation(cls, quarter_turns: int) -> "AttackSpec":
        if quarter_turns not in (1, 2, 3):
            raise ValueError("only quarter turns supported (1, 2 or 3 clockwise turns)")
        return cls(AttackKind.ROTATION, quarter_turns=quarter_turns)

    @property
    def label(self) -> str:
        if self.kind is AttackKind.ROTATION:
            return f"rotate={90 * self.quarter_turns}"
        return f"brightness={format_percent(self.level)}"

    def apply(self, img) -> np.ndarray:
        if self.kind is AttackKind.ROTATION:
            return attack_rotate(img, self.quarter_turns)
        return attack_brightness(img, self.level, self.mode)


def format_percent(level: float) -> str:
    pct = round(level * 100, 6)
    text = f"{pct:+g}"
    return text + "%"


def parse_brightness(text: str) -> float:
    """``"-25%"`` -> -0.25; a bare number is a fraction, so ``"0.5"`` -> 0.5."""
    text = text.strip()
    try:
        if text.endswith("%"):
            level = float(text[:-1]) / 100.0
        else:
            level = float(text)
    except ValueError:
        raise ValueError(f"invalid brightness level {text!r}") from None
    if not -1.0 <= level <= 1.0:
        raise ValueError(f"brightness level {text!r} outside [-100%, +100%]")
    return level


def parse_rotation(text: str) -> int:
    """Degrees clockwise (90, 180, 270) to quarter turns."""
    text = text.strip().rstrip("°")
    try:
        degrees = float(text)
    except ValueError:
        raise ValueError(f"invalid rotation {text!r}") from None
    if degrees not in (90.0, 180.0, 270.0):
        raise ValueError(f"only quarter turns supported (90, 180, 270), got {text}")
    return int(degrees) // 90


_SPEC_RE = re.compile(r"^\s*(brightness|rotate)\s*=\s*(.+?)\s*$")


def parse_attack(text: str, mode: BrightnessMode | str = BrightnessMode.ADDITIVE) -> AttackSpec:
    """Parse ``brightness=-25%`` or ``rotate=90`` style attack names."""
    match = _SPEC_RE.match(text)
    if not match:
        raise ValueError(f"invalid attack {text!r}: expected brightness=<level> or rotate=<degrees>")
    kind, value = match.groups()
    if kind == "rotate":
        return AttackSpec.rotation(parse_rotation(value))
    return AttackSpec.brightness(parse_brightness(value), mode)
