"""Regenerate the synthetic two-recording fixture under tests/fixtures/.

The curves are invented: a slow introduction (bars 1-34), an Allegro with
expressive dips near bars 72 and 159, and a fast coda (bars 368-383). The
second recording runs a few BPM faster. Values are rounded to 0.01 BPM.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
N_BARS = 400


def curve(rng: np.random.Generator, allegro: float, lift: float) -> np.ndarray:
    bars = np.arange(1, N_BARS + 1)
    bpm = np.where(bars <= 34, 36.0 + lift * 0.1 + rng.normal(0, 3.0, N_BARS), allegro)
    allegro_bars = bars > 34
    phrase = 8.0 * np.sin(2 * np.pi * (bars - 35) / 32.0)
    bpm = bpm + np.where(allegro_bars, phrase + rng.normal(0, 6.0, N_BARS), 0.0)
    for centre, depth in ((72, 45.0), (159, 50.0), (240, 30.0), (300, 35.0)):
        bpm -= np.where(allegro_bars, depth * np.exp(-0.5 * ((bars - centre) / 2.0) ** 2), 0.0)
    coda = (bars >= 368) & (bars <= 383)
    bpm = np.where(coda, 150 + (bars - 368) * 5.5 + lift + rng.normal(0, 3.0, N_BARS), bpm)
    return np.round(bpm, 2)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240501)
    recs = {"casals": curve(rng, 139.0, 0.0), "isserlis": curve(rng, 145.0, 6.0)}
    beats = np.where(np.arange(1, N_BARS + 1) <= 34, 3, 4)
    lines = ["recording_id,bar_index,n_beats,bpm"]
    for rid, bpm in recs.items():
        lines += [f"{rid},{i + 1},{beats[i]},{bpm[i]:.2f}" for i in range(N_BARS)]
    (OUT / "two_recordings.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    (OUT / "op5n1_sections.csv").write_text(
        "name,start_bar,end_bar\n"
        "Introduction,1,34\nExposition,35,150\nDevelopment,151,240\nRecapitulation,241,367\nCoda,368,400\n",
        encoding="utf-8",
    )
    (OUT / "meta.csv").write_text(
        "recording_id,label,year,color\n"
        "casals,Casals (1930-39),1930-39,#2166ac\n"
        "isserlis,Isserlis (2012),2012,#d6604d\n",
        encoding="utf-8",
    )


if __name__ == "__main__":
    main()
