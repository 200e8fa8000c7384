"""Experiment matrix: embed once per scheme, attack, measure, extract.

A bench config is an INI file with a single ``[bench]`` section. Keys:

``cover``            cover graymap path (relative paths resolve against the config file)
``watermark``        watermark graymap path; pixels >= 128 are 1 bits
``schemes``          comma-separated subset of ``spatial, dct, dwt``
``attacks``          comma-separated attack names, e.g. ``brightness=-25%, rotate=90``
``brightness_mode``  ``additive`` (default) or ``multiplicative``
``key``              PN master key, decimal or 0x-hex (default 0)
``gain.spatial``, ``gain.dct``, ``gain.dwt``   per-scheme gain overrides
``pairing``          ``both`` (default), ``cover_vs_attacked`` or ``watermarked_vs_attacked``
``output_dir``       report directory (default ``bench_out``)

Unknown keys or sections are errors.
"""

from __future__ import annotations

import configparser
import csv
import enum
import hashlib
import io
import json
import logging
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, metrics, schemes
from .attacks import AttackSpec, BrightnessMode, parse_attack
from .image import check_gray, read_pgm
from .prng import parse_key
from .schemes import SchemeId

log = logging.getLogger(__name__)

COLUMNS = (
    "scheme", "attack", "pairing", "psnr_db", "rmse", "mae", "ber",
    "gain", "key", "brightness_mode", "note",
)
PIVOT_METRICS = ("psnr_db", "rmse", "mae")
BASELINE_ATTACK = "none"
BASELINE_PAIRING = "cover_vs_watermarked"
DEFAULT_ATTACKS = (
    "brightness=-25%", "brightness=+25%", "brightness=+50%",
    "rotate=90", "rotate=180", "rotate=270",
)


class Pairing(str, enum.Enum):
    COVER_VS_ATTACKED = "cover_vs_attacked"
    WATERMARKED_VS_ATTACKED = "watermarked_vs_attacked"
    BOTH = "both"

    def expand(self) -> tuple["Pairing", ...]:
        if self is Pairing.BOTH:
            return (Pairing.COVER_VS_ATTACKED, Pairing.WATERMARKED_VS_ATTACKED)
        return (self,)


class ConfigError(ValueError):
    pass


def threshold_watermark_image(img) -> np.ndarray:
    return (check_gray(img) >= 128).astype(np.uint8)


def watermark_to_image(bits) -> np.ndarray:
    return (schemes.check_bits(bits) * 255).astype(np.uint8)


@dataclass
class BenchConfig:
    cover_path: Path
    watermark_path: Path
    schemes: list[SchemeId] = field(default_factory=lambda: list(SchemeId))
    attacks: list[AttackSpec] = field(default_factory=list)
    gains: dict[SchemeId, float] = field(default_factory=lambda: dict(schemes.DEFAULT_GAINS))
    key: int = 0
    pairing: Pairing = Pairing.BOTH
    output_dir: Path = Path("bench_out")
    brightness_mode: BrightnessMode = BrightnessMode.ADDITIVE
    source_bytes: bytes = b""

    def __post_init__(self):
        if not self.schemes:
            raise ConfigError("at least one scheme is required")
        if not self.attacks:
            raise ConfigError("at least one attack is required")


_KEYS = {
    "cover", "watermark", "schemes", "attacks", "brightness_mode", "key",
    "gain.spatial", "gain.dct", "gain.dwt", "pairing", "output_dir",
}


def _split_list(text: str) -> list[str]:
    return [item.strip() for item in text.replace("\n", ",").split(",") if item.strip()]


def parse_config(text: str, base_dir: Path = Path(".")) -> BenchConfig:
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    extra = [s for s in parser.sections() if s != "bench"]
    if extra:
        raise ConfigError(f"unknown config section(s): {', '.join(extra)}")
    if not parser.has_section("bench"):
        raise ConfigError("config needs a [bench] section")
    raw = dict(parser.items("bench"))
    unknown = sorted(set(raw) - _KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    for required in ("cover", "watermark"):
        if not raw.get(required):
            raise ConfigError(f"missing required key {required!r}")

    try:
        mode = BrightnessMode(raw.get("brightness_mode", "additive").strip().lower())
        scheme_list = [SchemeId.parse(s) for s in _split_list(raw.get("schemes", "spatial, dct, dwt"))]
        attack_names = _split_list(raw["attacks"]) if "attacks" in raw else list(DEFAULT_ATTACKS)
        attacks = [parse_attack(a, mode) for a in attack_names]
        gains = dict(schemes.DEFAULT_GAINS)
        for scheme in SchemeId:
            if f"gain.{scheme.value}" in raw:
                gains[scheme] = float(raw[f"gain.{scheme.value}"])
                if not (math.isfinite(gains[scheme]) and gains[scheme] > 0):
                    raise ValueError(f"gain.{scheme.value} must be positive")
        key = parse_key(raw.get("key", "0"))
        pairing = Pairing(raw.get("pairing", "both").strip().lower())
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if len(set(scheme_list)) != len(scheme_list):
        raise ConfigError("schemes are listed more than once")

    return BenchConfig(
        cover_path=base_dir / raw["cover"].strip(),
        watermark_path=base_dir / raw["watermark"].strip(),
        schemes=scheme_list,
        attacks=attacks,
        gains=gains,
        key=key,
        pairing=pairing,
        output_dir=base_dir / raw.get("output_dir", "bench_out").strip(),
        brightness_mode=mode,
        source_bytes=text.encode("utf-8"),
    )


def load_config(path) -> BenchConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), path.parent)


@dataclass
class Row:
    scheme: str
    attack: str
    pairing: str
    psnr_db: float | None = None
    rmse: float | None = None
    mae: float | None = None
    ber: float | None = None
    gain: float = 0.0
    key: str = ""
    brightness_mode: str = ""
    notes: list[str] = field(default_factory=list)
    failed: bool = False

    def cells(self) -> list[str]:
        return [
            self.scheme, self.attack, self.pairing,
            _fmt(self.psnr_db), _fmt(self.rmse), _fmt(self.mae), _fmt(self.ber),
            _fmt(self.gain), self.key, self.brightness_mode, "; ".join(self.notes),
        ]

    def as_json(self) -> dict:
        def num(x):
            if x is None:
                return None
            return "inf" if math.isinf(x) else round(x, 6)
        return {
            "scheme": self.scheme, "attack": self.attack, "pairing": self.pairing,
            "psnr_db": num(self.psnr_db), "rmse": num(self.rmse), "mae": num(self.mae),
            "ber": num(self.ber), "gain": num(self.gain), "key": self.key,
            "brightness_mode": self.brightness_mode, "note": "; ".join(self.notes),
        }


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    if math.isinf(x):
        return "inf"
    return f"{x:.6f}"


@dataclass
class BenchReport:
    rows: list[Row]
    environment: dict

    @property
    def failed(self) -> bool:
        return any(r.failed for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in self.rows:
            writer.writerow(row.cells())
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {"environment": self.environment, "rows": [r.as_json() for r in self.rows]}
        return json.dumps(payload, indent=2, sort_keys=False) + "\n"

    def pivots(self) -> dict[str, str]:
        """Per-metric tables with attacks as rows and schemes as columns."""
        scheme_names = list(dict.fromkeys(r.scheme for r in self.rows))
        attack_names = list(dict.fromkeys(r.attack for r in self.rows if r.attack != BASELINE_ATTACK))
        pairings = list(dict.fromkeys(r.pairing for r in self.rows if r.attack != BASELINE_ATTACK))
        index = {(r.scheme, r.attack, r.pairing): r for r in self.rows}

        def table(metric: str, pairing: str) -> str:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["attack", *scheme_names])
            for attack in attack_names:
                cells = []
                for scheme in scheme_names:
                    row = index.get((scheme, attack, pairing))
                    cells.append(_fmt(getattr(row, metric)) if row else "")
                writer.writerow([attack, *cells])
            return buf.getvalue()

        out = {}
        for metric in PIVOT_METRICS:
            for pairing in pairings:
                out[f"pivot_{metric}_{pairing}.csv"] = table(metric, pairing)
        if pairings:
            out["pivot_ber.csv"] = table("ber", pairings[0])
        return out

    def write(self, outdir) -> list[Path]:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        files = {"report.csv": self.to_csv(), "report.json": self.to_json(), **self.pivots()}
        written = []
        for name, text in files.items():
            path = outdir / name
            path.write_text(text, encoding="utf-8", newline="")
            written.append(path)
        return written


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _measure(row: Row, reference: np.ndarray, attacked: np.ndarray) -> None:
    if reference.shape != attacked.shape:
        row.notes.append(
            f"dimensions differ ({reference.shape[0]}x{reference.shape[1]} vs "
            f"{attacked.shape[0]}x{attacked.shape[1]}); image metrics not computed"
        )
        return
    row.psnr_db = metrics.psnr(reference, attacked)
    row.rmse = metrics.rmse(reference, attacked)
    row.mae = metrics.mae(reference, attacked)


def _extract_ber(scheme: SchemeId, img, key: int, bits: np.ndarray, degenerate: bool) -> tuple[float | None, str | None]:
    if degenerate and scheme.keyed:
        return None, "degenerate watermark (all bits equal); BER not meaningful"
    recovered = schemes.extract(scheme, img, key, bits.shape)
    return metrics.ber(bits, recovered), None


def run_bench(config: BenchConfig, cover=None, watermark_img=None) -> BenchReport:
    """Run the full matrix; cell failures are recorded on their rows."""
    cover_bytes = wm_bytes = None
    if cover is None:
        cover_bytes = Path(config.cover_path).read_bytes()
        cover = read_pgm(config.cover_path)
    if watermark_img is None:
        wm_bytes = Path(config.watermark_path).read_bytes()
        watermark_img = read_pgm(config.watermark_path)
    cover = check_gray(cover)
    bits = threshold_watermark_image(watermark_img)
    degenerate = bool(bits.min() == bits.max())
    if degenerate:
        log.warning("watermark bits are all %d; spread-spectrum BER will not be reported", int(bits.flat[0]))

    rows: list[Row] = []
    pairings = config.pairing.expand()
    for scheme in config.schemes:
        gain = config.gains[scheme]
        common = dict(
            scheme=scheme.value,
            gain=gain,
            key=f"0x{config.key:016x}" if scheme.keyed else "",
            brightness_mode=config.brightness_mode.value,
        )
        baseline = Row(attack=BASELINE_ATTACK, pairing=BASELINE_PAIRING, **common)
        rows.append(baseline)
        log.info("embedding %s (k=%g)", scheme.value, gain)
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                marked = schemes.embed(scheme, cover, bits, config.key, gain)
            for w in caught:
                if issubclass(w.category, schemes.CapacityWarning):
                    baseline.notes.append(str(w.message))
        except Exception as exc:  # noqa: BLE001 - recorded per row, run continues
            log.error("%s embedding failed: %s", scheme.value, exc)
            baseline.failed = True
            baseline.notes.append(f"error: embedding failed: {exc}")
            for attack in config.attacks:
                for pairing in pairings:
                    rows.append(Row(attack=attack.label, pairing=pairing.value, failed=True,
                                    notes=[f"error: embedding failed: {exc}"], **common))
            continue

        _measure(baseline, cover, marked)
        try:
            baseline.ber, note = _extract_ber(scheme, marked, config.key, bits, degenerate)
            if note:
                baseline.notes.append(note)
        except Exception as exc:  # noqa: BLE001
            baseline.failed = True
            baseline.notes.append(f"error: extraction failed: {exc}")

        for attack in config.attacks:
            cell_rows = [Row(attack=attack.label, pairing=p.value, **common) for p in pairings]
            rows.extend(cell_rows)
            try:
                attacked = attack.apply(marked)
            except Exception as exc:  # noqa: BLE001
                for row in cell_rows:
                    row.failed = True
                    row.notes.append(f"error: attack failed: {exc}")
                continue
            ber_value, ber_note = None, None
            try:
                ber_value, ber_note = _extract_ber(scheme, attacked, config.key, bits, degenerate)
            except Exception as exc:  # noqa: BLE001
                ber_note = f"error: extraction failed: {exc}"
                for row in cell_rows:
                    row.failed = True
            for row, pairing in zip(cell_rows, pairings):
                reference = cover if pairing is Pairing.COVER_VS_ATTACKED else marked
                _measure(row, reference, attacked)
                row.ber = ber_value
                if ber_note:
                    row.notes.append(ber_note)
            log.debug("%s %s done", scheme.value, attack.label)

    environment = {
        "tool": "wmbench",
        "version": __version__,
        "config_sha256": _sha256(config.source_bytes),
        "cover_sha256": _sha256(cover_bytes) if cover_bytes is not None else _sha256(cover.tobytes()),
        "watermark_sha256": _sha256(wm_bytes) if wm_bytes is not None else _sha256(np.asarray(watermark_img).tobytes()),
        "cover_shape": list(cover.shape),
        "watermark_shape": list(bits.shape),
        "brightness_mode": config.brightness_mode.value,
        "pairing": config.pairing.value,
    }
    return BenchReport(rows=rows, environment=environment)
