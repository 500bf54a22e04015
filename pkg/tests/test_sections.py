import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tempovis.errors import DomainError
from tempovis.model import BarRecord, Section, SectionMap, TempoSeries
from tempovis.sections import section_durations, section_stats, summary_stats


def series_from_bpm(bpms, beats=4, rid="r"):
    return TempoSeries(rid, tuple(BarRecord.from_bpm(i + 1, beats, b) for i, b in enumerate(bpms)))


def test_constant_series():
    st_ = summary_stats(series_from_bpm([120.0] * 10))
    assert st_.mean_bpm == 120.0
    assert st_.std_bpm == 0.0
    assert st_.n_bars == 10
    # 10 bars of 4 beats at 120 BPM last 2 s each
    assert st_.total_duration_s == pytest.approx(20.0, abs=1e-12)


def test_two_bar_mean_and_population_std():
    st_ = summary_stats(series_from_bpm([100.0, 140.0]))
    assert st_.mean_bpm == 120.0
    assert st_.std_bpm == 20.0


def test_mean_is_per_bar_not_beats_over_time():
    s = TempoSeries("r", (BarRecord.from_bpm(1, 4, 60.0), BarRecord.from_bpm(2, 4, 120.0)))
    st_ = summary_stats(s)
    assert st_.mean_bpm == 90.0
    # 8 beats in 6 s would be 80 BPM
    assert 8 * 60 / st_.total_duration_s == pytest.approx(80.0)


def test_stats_against_exact_arithmetic():
    bpms = [137.5, 141.25, 99.0, 163.125, 120.0, 88.5]
    mean = sum(Fraction(b) for b in bpms) / len(bpms)
    var = sum((Fraction(b) - mean) ** 2 for b in bpms) / len(bpms)
    st_ = summary_stats(series_from_bpm(bpms))
    assert st_.mean_bpm == pytest.approx(float(mean), rel=1e-15)
    assert st_.std_bpm == pytest.approx(math.sqrt(var), rel=1e-12)


def test_bar_range_and_section_stats():
    s = series_from_bpm([100.0] * 5 + [140.0, 160.0])
    smap = SectionMap.from_triples([("Intro", 1, 5), ("Allegro", 6, 7)])
    assert summary_stats(s, (6, 7)).mean_bpm == 150.0
    assert section_stats(s, smap, "Allegro").std_bpm == 10.0
    assert section_stats(s, smap, "Intro").n_bars == 5


@pytest.mark.parametrize("rng", [(7, 3), (0, 2), (5, 9)])
def test_bad_bar_ranges(rng):
    with pytest.raises(DomainError):
        summary_stats(series_from_bpm([100.0] * 7), rng)


def test_section_durations_order_and_sum():
    s = series_from_bpm([120.0] * 10)
    smap = SectionMap.from_triples([("A", 1, 3), ("B", 4, 10)])
    d = section_durations(s, smap)
    assert d.names == ["A", "B"]
    assert d["A"] == pytest.approx(6.0) and d["B"] == pytest.approx(14.0)
    assert d.total == pytest.approx(20.0)
    with pytest.raises(KeyError):
        d["C"]


def test_section_map_must_cover_series():
    s = series_from_bpm([120.0] * 10)
    with pytest.raises(DomainError, match="bars 9-10"):
        section_durations(s, SectionMap.from_triples([("A", 1, 8)]))
    with pytest.raises(DomainError, match="bar 12"):
        section_durations(s, SectionMap.from_triples([("A", 1, 12)]))


@st.composite
def series_and_cuts(draw):
    n = draw(st.integers(2, 120))
    bpms = draw(st.lists(st.floats(20.0, 300.0), min_size=n, max_size=n))
    beats = draw(st.lists(st.integers(1, 6), min_size=n, max_size=n))
    series = TempoSeries("r", tuple(BarRecord.from_bpm(i + 1, k, b) for i, (k, b) in enumerate(zip(beats, bpms))))
    cuts = sorted(draw(st.sets(st.integers(2, n), max_size=min(n - 1, 8))))
    return series, cuts


def _map(cuts, n):
    starts = [1] + cuts
    ends = [c - 1 for c in cuts] + [n]
    return SectionMap(tuple(Section(f"S{i}", a, b) for i, (a, b) in enumerate(zip(starts, ends))))


@settings(max_examples=150, deadline=None)
@given(series_and_cuts())
def test_section_durations_are_additive(data):
    series, cuts = data
    d = section_durations(series, _map(cuts, len(series)))
    assert abs(d.total - series.total_duration_s) <= 1e-9 * series.total_duration_s


@settings(max_examples=100, deadline=None)
@given(series_and_cuts(), st.data())
def test_splitting_a_section_preserves_its_duration(data, draw):
    series, cuts = data
    n = len(series)
    coarse = section_durations(series, _map(cuts, n))
    free = [c for c in range(2, n + 1) if c not in cuts]
    if not free:
        return
    extra = draw.draw(st.sampled_from(free))
    fine_cuts = sorted(cuts + [extra])
    fine = section_durations(series, _map(fine_cuts, n))
    # sections of the coarse map are unions of consecutive fine sections
    starts = [1] + fine_cuts
    coarse_starts = [1] + cuts
    j = 0
    for i, start in enumerate(coarse_starts):
        end = coarse_starts[i + 1] if i + 1 < len(coarse_starts) else n + 1
        parts = []
        while j < len(starts) and starts[j] < end:
            parts.append(fine.values[j])
            j += 1
        assert math.fsum(parts) == pytest.approx(coarse.values[i], rel=1e-12)
