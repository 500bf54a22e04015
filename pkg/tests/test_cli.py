import csv
import io
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from tempovis.cli import run
from tempovis.ingest import format_timing_csv
from tempovis.model import BarRecord, TempoSeries


def base_args(paths, *extra):
    return ["--input", str(paths["timing"]), "--sections", str(paths["sections"]), "--meta", str(paths["meta"]), *extra]


def test_panel_happy_path(fixture_paths, tmp_path):
    out = tmp_path / "panel.svg"
    assert run(["panel", *base_args(fixture_paths), "--out", str(out)]) == 0
    root = ET.parse(out).getroot()
    assert root.get("width") == "1200"


@pytest.mark.parametrize("command", ["tempograph", "multiples", "histogram", "ridgeline", "stackedbar", "combo"])
def test_every_chart_command(fixture_paths, tmp_path, command):
    out = tmp_path / "sub" / f"{command}.svg"
    assert run([command, *base_args(fixture_paths), "--out", str(out), "--width", "600"]) == 0
    assert ET.parse(out).getroot().get("width") == "600"


def _many(tmp_path, n):
    rng = np.random.default_rng(0)
    series = [TempoSeries(f"r{i}", tuple(BarRecord.from_bpm(b + 1, 4, float(v)) for b, v in
                                         enumerate(rng.uniform(80, 160, 30)))) for i in range(n)]
    path = tmp_path / "many.csv"
    path.write_text(format_timing_csv(series))
    return path


def test_six_recordings_refused_with_hint(tmp_path, capsys):
    out = tmp_path / "t.svg"
    assert run(["tempograph", "--input", str(_many(tmp_path, 6)), "--out", str(out)]) == 1
    assert "multiples" in capsys.readouterr().err
    assert not out.exists()
    assert run(["multiples", "--input", str(_many(tmp_path, 6)), "--out", str(out)]) == 0


def test_missing_input_is_io_error(tmp_path, capsys):
    assert run(["combo", "--input", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "o.svg")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_unwritable_output_is_io_error(fixture_paths, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(["combo", *base_args(fixture_paths), "--out", str(blocker / "x.svg")]) == 2


def test_bad_input_and_flags_are_validation_errors(tmp_path, fixture_paths, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("recording_id,bar_index,n_beats,bpm\nr,1,4,-3\n")
    assert run(["combo", "--input", str(bad), "--out", str(tmp_path / "o.svg")]) == 1
    assert "line 2" in capsys.readouterr().err
    assert run(["combo", "--input", str(bad), "--bogus"]) == 1
    assert run(["combo", *base_args(fixture_paths), "--recordings", "nobody", "--out", str(tmp_path / "o.svg")]) == 1
    assert run(["combo", *base_args(fixture_paths), "--section", "Allegro", "--out", str(tmp_path / "o.svg")]) == 1


def test_stats_output(fixture_paths, capsys):
    assert run(["stats", *base_args(fixture_paths), "--section", "Exposition"]) == 0
    first, second = capsys.readouterr().out.split("\n\n")
    summary = list(csv.DictReader(io.StringIO(first)))
    assert [r["recording_id"] for r in summary] == ["casals", "isserlis"]
    assert all(r["scope"] == "Exposition" and r["n_bars"] == "116" for r in summary)
    durations = list(csv.DictReader(io.StringIO(second)))
    assert len(durations) == 10


@pytest.mark.parametrize("command", ["tempograph", "stackedbar", "combo"])
def test_seed_only_affects_jittered_charts(fixture_paths, tmp_path, command):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    run([command, *base_args(fixture_paths), "--out", str(a), "--seed", "1"])
    run([command, *base_args(fixture_paths), "--out", str(b), "--seed", "2"])
    assert a.read_bytes() == b.read_bytes()


def test_histogram_depends_on_seed(fixture_paths, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    run(["histogram", *base_args(fixture_paths), "--out", str(a), "--seed", "1"])
    run(["histogram", *base_args(fixture_paths), "--out", str(b), "--seed", "2"])
    assert a.read_bytes() != b.read_bytes()


def test_recording_selection_keeps_its_own_jitter(fixture_paths, tmp_path):
    both, one = tmp_path / "both.svg", tmp_path / "one.svg"
    run(["histogram", *base_args(fixture_paths), "--out", str(both)])
    run(["histogram", *base_args(fixture_paths), "--recordings", "isserlis", "--out", str(one)])
    body = [l for l in one.read_text().splitlines() if l.startswith("<polyline")]
    assert all(l in both.read_text() for l in body)


def test_help_lists_guide(capsys):
    with pytest.raises(SystemExit):
        run(["--help"])
    out = capsys.readouterr().out
    assert "more than five recordings" in out and "population" in out
