"""End-to-end acceptance checks, one test per criterion.

A per-criterion PASS/FAIL/SKIP summary is printed at the end of the run
(see ``conftest.py``).
"""

import os
import time
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from conftest import GOLDEN
from oracles import centered_difference, count_modes, trapezoid
from tempovis.cli import run
from tempovis.density import empirical_cdf, gaussian_kde, population_std, spline_pdf
from tempovis.ingest import bpm_from_bar, duration_from_bpm, format_timing_csv, load_timing
from tempovis.model import BarRecord, Section, SectionMap, TempoSeries
from tempovis.pipeline import CHART_COMMANDS
from tempovis.sections import section_durations, summary_stats

criterion = pytest.mark.criterion


def _mixture(rng, n, weights, means, sds):
    comp = rng.choice(len(weights), size=n, p=weights)
    return rng.normal(np.take(means, comp), np.take(sds, comp))


@criterion(1, "spline-CDF interpolation, clamped ends and PDF mass")
def test_spline_cdf_estimator():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    for k in range(50):
        n = int(rng.integers(200, 1001))
        if k % 2:
            data = _mixture(rng, n, [0.2, 0.8], [37, 140], [5, 20])
        else:
            data = rng.normal(rng.uniform(60, 180), rng.uniform(5, 30), n)
        seed = int(rng.integers(2**32))
        hist, pdf = spline_pdf(data, seed=seed)
        ecdf = empirical_cdf(hist)
        s = pdf.spline
        assert np.max(np.abs(s(ecdf.xs) - ecdf.Fs)) < 1e-9
        assert abs(s.derivative(s.knots[0])) < 1e-9
        assert abs(s.derivative(s.knots[-1])) < 1e-9
        assert 0.97 <= trapezoid(pdf.density, pdf.grid) <= 1.03
    assert time.perf_counter() - start < 5.0


@criterion(2, "bimodal mixture recovers exactly two modes near 37 and 140 BPM")
def test_bimodality_recovery():
    rng = np.random.default_rng(2024)
    data = _mixture(rng, 400, [0.2, 0.8], [37, 140], [5, 20])
    start = time.perf_counter()
    hist, pdf = spline_pdf(data, seed=2024)
    modes = pdf.grid[count_modes(pdf.density, 0.25)]
    elapsed = time.perf_counter() - start
    print(f"modes above 25% of peak: {np.round(modes, 1).tolist()}")
    assert elapsed < 1.0
    assert len(modes) == 2
    assert abs(modes[0] - 37) <= 6 and abs(modes[1] - 140) <= 6


@criterion(3, "spline derivative matches centered finite differences")
def test_derivative_oracle():
    rng = np.random.default_rng(303)
    for _ in range(10):
        data = rng.normal(rng.uniform(80, 160), rng.uniform(5, 25), int(rng.integers(200, 800)))
        _, pdf = spline_pdf(data, seed=int(rng.integers(2**32)))
        s = pdf.spline
        lo, hi = s.knots[0], s.knots[-1]
        pts = rng.uniform(lo + 1e-3, hi - 1e-3, 100)
        fd = centered_difference(s, pts, 1e-6)
        assert np.max(np.abs(s.derivative(pts) - fd)) < 1e-4


@criterion(4, "Gaussian KDE integrates to one")
def test_kde_mass():
    rng = np.random.default_rng(404)
    data = _mixture(rng, 500, [0.2, 0.8], [37, 140], [5, 20])
    h = 0.07 * population_std(data)
    kde = gaussian_kde(data, 0.07, data.min() - 5 * h, data.max() + 5 * h, 4000)
    assert kde.bandwidth == pytest.approx(h)
    assert abs(trapezoid(kde.density, kde.grid) - 1.0) <= 0.02


def _random_map(rng, n_bars, n_sections):
    cuts = sorted(rng.choice(np.arange(2, n_bars + 1), size=n_sections - 1, replace=False).tolist())
    starts = [1] + cuts
    ends = [c - 1 for c in cuts] + [n_bars]
    return SectionMap(tuple(Section(f"S{i}", a, b) for i, (a, b) in enumerate(zip(starts, ends)))), cuts


@criterion(5, "section durations add up and survive refinement")
def test_sectional_additivity():
    rng = np.random.default_rng(505)
    for _ in range(200):
        n = int(rng.integers(10, 500))
        bars = tuple(BarRecord.from_bpm(i + 1, int(rng.integers(1, 7)), float(rng.uniform(20, 300)))
                     for i in range(n))
        series = TempoSeries("r", bars)
        smap, cuts = _random_map(rng, n, int(rng.integers(1, min(n, 9))))
        d = section_durations(series, smap)
        assert abs(d.total - series.total_duration_s) < 1e-6
        # split one section in two
        free = [c for c in range(2, n + 1) if c not in cuts]
        extra = int(rng.choice(free))
        fine_cuts = sorted(cuts + [extra])
        fine = section_durations(series, SectionMap(tuple(
            Section(f"T{i}", a, b) for i, (a, b) in
            enumerate(zip([1] + fine_cuts, [c - 1 for c in fine_cuts] + [n]))
        )))
        assert abs(fine.total - series.total_duration_s) < 1e-6
        k = fine_cuts.index(extra)  # the split section is fine[k] + fine[k + 1]
        assert abs(fine.values[k] + fine.values[k + 1] - d.values[k]) < 1e-6


@criterion(6, "BPM and duration conversions invert each other")
def test_bpm_round_trip():
    rng = np.random.default_rng(606)
    beats = rng.integers(1, 13, 10_000)
    durations = rng.uniform(0.05, 30.0, 10_000)
    worst = 0.0
    for n, d in zip(beats.tolist(), durations.tolist()):
        back = duration_from_bpm(n, bpm_from_bar(n, d))
        worst = max(worst, abs(back - d) / d)
    assert worst < 1e-12


@criterion(7, "chart commands reproduce the golden SVG files")
def test_golden_files(fixture_paths, tmp_path, update_golden):
    start = time.perf_counter()
    outputs = {}
    for command in CHART_COMMANDS:
        out = tmp_path / f"{command}.svg"
        code = run([command, "--input", str(fixture_paths["timing"]), "--sections", str(fixture_paths["sections"]),
                    "--meta", str(fixture_paths["meta"]), "--seed", "0", "--out", str(out)])
        assert code == 0, command
        outputs[command] = out.read_bytes()
    assert time.perf_counter() - start < 10.0
    for command, data in outputs.items():
        ET.fromstring(data)
        golden = GOLDEN / f"{command}.svg"
        if update_golden:
            golden.parent.mkdir(exist_ok=True)
            golden.write_bytes(data)
        assert golden.exists(), f"missing {golden}; run pytest --update-golden"
        assert data == golden.read_bytes(), command


CORPUS = os.environ.get("TEMPOVIS_CORPUS")


@criterion(8, "published durations and Allegro statistics")
@pytest.mark.skipif(not CORPUS, reason="set TEMPOVIS_CORPUS to a directory holding timing.csv")
def test_published_values():
    series = {s.recording_id: s for s in load_timing(Path(CORPUS) / "timing.csv")}
    allegro_start = 35
    targets = {"casals": (905.0, 138.8, 23.8), "isserlis": (851.0, 144.4, 23.4)}
    for rid, (total, mean, std) in targets.items():
        s = series[rid]
        allegro = summary_stats(s, (allegro_start, s.bars[-1].bar_index))
        assert abs(s.total_duration_s - total) <= 1.0, rid
        assert abs(allegro.mean_bpm - mean) <= 0.1, rid
        assert abs(allegro.std_bpm - std) <= 0.1, rid


@criterion(9, "tempograph refuses more than five recordings")
def test_legibility_bound(tmp_path, capsys):
    rng = np.random.default_rng(909)
    series = [TempoSeries(f"r{i}", tuple(BarRecord.from_bpm(b + 1, 4, float(v))
                                         for b, v in enumerate(rng.uniform(90, 150, 40)))) for i in range(6)]
    path = tmp_path / "six.csv"
    path.write_text(format_timing_csv(series))
    out = tmp_path / "t.svg"
    assert run(["tempograph", "--input", str(path), "--out", str(out)]) == 1
    assert "multiples" in capsys.readouterr().err
    assert not out.exists()
