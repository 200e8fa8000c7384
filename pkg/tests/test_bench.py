import json

import numpy as np
import pytest

from conftest import mixed_bits
from wmbench import bench
from wmbench.bench import COLUMNS, ConfigError, parse_config, run_bench, threshold_watermark_image, watermark_to_image
from wmbench.image import write_pgm

GOLDEN_HEADER = "scheme,attack,pairing,psnr_db,rmse,mae,ber,gain,key,brightness_mode,note"


@pytest.fixture
def workspace(tmp_path, test_image_256):
    rng = np.random.default_rng(8)
    write_pgm(tmp_path / "cover.pgm", test_image_256)
    write_pgm(tmp_path / "wm.pgm", watermark_to_image(mixed_bits(rng)))
    return tmp_path


def write_config(path, **extra):
    lines = ["[bench]", "cover = cover.pgm", "watermark = wm.pgm", "key = 0x2a", "output_dir = out"]
    lines += [f"{k.replace('__', '.')} = {v}" for k, v in extra.items()]
    cfg = path / "bench.ini"
    cfg.write_text("\n".join(lines) + "\n")
    return cfg


def test_threshold_boundary():
    bits = threshold_watermark_image(np.array([[128, 127, 255, 0]], np.uint8))
    np.testing.assert_array_equal(bits, [[1, 0, 1, 0]])


def test_threshold_round_trips_writer(rng):
    bits = mixed_bits(rng, (5, 7))
    np.testing.assert_array_equal(threshold_watermark_image(watermark_to_image(bits)), bits)


def test_all_black_mark_is_all_zeros():
    assert threshold_watermark_image(np.zeros((4, 4), np.uint8)).sum() == 0


def test_full_matrix_row_count(workspace):
    report = run_bench(bench.load_config(write_config(workspace)))
    assert len(report.rows) == 3 * (6 * 2 + 1)
    assert not report.failed


def test_single_pairing_row_count(workspace):
    report = run_bench(bench.load_config(write_config(workspace, pairing="cover_vs_attacked")))
    assert len(report.rows) == 3 * (6 + 1)
    assert {r.pairing for r in report.rows} == {"cover_vs_attacked", "cover_vs_watermarked"}


def test_golden_header(workspace):
    report = run_bench(bench.load_config(write_config(workspace, schemes="dct", attacks="rotate=180")))
    assert ",".join(COLUMNS) == GOLDEN_HEADER
    assert report.to_csv().splitlines()[0] == GOLDEN_HEADER
    assert list(json.loads(report.to_json())["rows"][0]) == list(COLUMNS)


def test_baseline_rows_have_zero_ber(workspace):
    report = run_bench(bench.load_config(write_config(workspace)))
    baselines = [r for r in report.rows if r.attack == "none"]
    assert [r.scheme for r in baselines] == ["spatial", "dct", "dwt"]
    assert all(r.ber == 0 for r in baselines)
    assert all(r.pairing == "cover_vs_watermarked" for r in baselines)


def test_report_files_byte_identical(workspace):
    cfg = bench.load_config(write_config(workspace))
    first = run_bench(cfg).write(workspace / "a")
    second = run_bench(cfg).write(workspace / "b")
    assert [p.name for p in first] == [p.name for p in second]
    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()


def test_pivots_shape(workspace):
    report = run_bench(bench.load_config(write_config(workspace)))
    pivots = report.pivots()
    assert set(pivots) == {
        "pivot_ber.csv",
        *(f"pivot_{m}_{p}.csv" for m in ("psnr_db", "rmse", "mae")
          for p in ("cover_vs_attacked", "watermarked_vs_attacked")),
    }
    lines = pivots["pivot_psnr_db_cover_vs_attacked.csv"].splitlines()
    assert lines[0] == "attack,spatial,dct,dwt"
    assert [line.split(",")[0] for line in lines[1:]] == list(bench.DEFAULT_ATTACKS)


def test_non_square_odd_rotation(tmp_path, test_image_256):
    rng = np.random.default_rng(2)
    write_pgm(tmp_path / "cover.pgm", test_image_256[:128, :])
    write_pgm(tmp_path / "wm.pgm", watermark_to_image(mixed_bits(rng)))
    report = run_bench(bench.load_config(write_config(tmp_path, attacks="rotate=90, rotate=180")))
    for row in report.rows:
        if row.attack == "rotate=90":
            assert row.psnr_db is None and row.rmse is None and row.mae is None
            assert "dimensions differ" in " ".join(row.notes)
            assert row.ber is not None
        if row.attack == "rotate=180":
            assert row.psnr_db is not None
    assert not report.failed
    csv_row = next(line for line in report.to_csv().splitlines() if line.startswith("dwt,rotate=90"))
    assert ",,," in csv_row


def test_capacity_failure_is_annotated(tmp_path):
    rng = np.random.default_rng(4)
    write_pgm(tmp_path / "cover.pgm", rng.integers(0, 256, (16, 16)).astype(np.uint8))
    write_pgm(tmp_path / "wm.pgm", watermark_to_image(mixed_bits(rng, (3, 3))))
    report = run_bench(bench.load_config(write_config(tmp_path, schemes="dct, dwt", attacks="rotate=180")))
    dct_rows = [r for r in report.rows if r.scheme == "dct"]
    assert all(r.failed for r in dct_rows)
    assert "embedding failed" in dct_rows[0].notes[0]
    assert report.failed
    assert any(r.scheme == "dwt" and not r.failed for r in report.rows)


def test_degenerate_watermark_reported(tmp_path, test_image_256, caplog):
    write_pgm(tmp_path / "cover.pgm", test_image_256)
    write_pgm(tmp_path / "wm.pgm", np.zeros((4, 4), np.uint8))
    report = run_bench(bench.load_config(write_config(tmp_path, attacks="rotate=90")))
    assert "all 0" in caplog.text
    for row in report.rows:
        if row.scheme == "dct":
            assert row.ber is not None
        else:
            assert row.ber is None
            assert any("degenerate" in n for n in row.notes)


def test_gain_and_mode_recorded(workspace):
    cfg = bench.load_config(write_config(workspace, gain__dwt="3", brightness_mode="multiplicative",
                                         attacks="brightness=+25%"))
    report = run_bench(cfg)
    dwt = [r for r in report.rows if r.scheme == "dwt"]
    assert all(r.gain == 3.0 for r in dwt)
    assert all(r.brightness_mode == "multiplicative" for r in report.rows)
    assert all(r.key == "" for r in report.rows if r.scheme == "dct")
    assert all(r.key == "0x000000000000002a" for r in dwt)


@pytest.mark.parametrize("text, fragment", [
    ("[bench]\ncover = a\nwatermark = b\ncolour = red\n", "unknown config key"),
    ("[bench]\ncover = a\nwatermark = b\n[extra]\nx = 1\n", "unknown config section"),
    ("[bench]\nwatermark = b\n", "missing required key"),
    ("[bench]\ncover = a\nwatermark = b\nschemes = fft\n", "unknown scheme"),
    ("[bench]\ncover = a\nwatermark = b\nattacks = rotate=45\n", "quarter turns"),
    ("[bench]\ncover = a\nwatermark = b\nattacks =\n", "at least one attack"),
    ("[bench]\ncover = a\nwatermark = b\ngain.dct = -1\n", "positive"),
    ("[bench]\ncover = a\nwatermark = b\npairing = sideways\n", "sideways"),
    ("cover = a\n", "malformed"),
])
def test_config_errors(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config(text)


def test_config_defaults(tmp_path):
    cfg = parse_config("[bench]\ncover = c.pgm\nwatermark = w.pgm\n", tmp_path)
    assert cfg.cover_path == tmp_path / "c.pgm"
    assert [a.label for a in cfg.attacks] == list(bench.DEFAULT_ATTACKS)
    assert cfg.pairing is bench.Pairing.BOTH
    assert cfg.key == 0
