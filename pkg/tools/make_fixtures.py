#!/usr/bin/env python3
"""Regenerate the committed test fixtures from the slow oracle pipeline.

Run from the repository root:

    python3 tools/make_fixtures.py

Fixtures are deterministic; rerunning must reproduce the committed files.
The anomaly coordinates are computed with the pure-Python oracle chain
(tests/oracles.py), never with the production code, so the golden files
stay independent of the implementation they verify.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))
sys.path.insert(0, str(ROOT / "src"))

from tests import oracles  # noqa: E402
from tests.conftest import FIXTURE_DIR, two_gaussian_features  # noqa: E402

# Planted extremes for the three-type classification scenario (k=30, m=5):
#   anti-diagonal far corners -> high spatial AND high density anomaly (I)
#   diagonal far corners      -> high spatial, saturated ECDF so low density (II)
#   moderate anti-diagonal    -> high density, unremarkable spatial (III)
PLANTED = np.array(
    [
        [16.0, 1.0],   # I
        [14.0, -4.0],  # I
        [-5.0, 13.0],  # I
        [12.0, 12.0],  # II
        [14.0, 14.0],  # II
        [7.5, 2.0],    # III
        [2.0, 7.5],    # III
    ]
)
EXPECTED_TYPES = ["I", "I", "I", "II", "II", "III", "III"]


def classify_by_top_m(space: np.ndarray, m: int) -> list[str]:
    """Independent reimplementation of the top-m set algebra (oracle side)."""
    k_e = space[:, 0]
    k_p = space[:, 1]
    t_e = sorted(k_e, reverse=True)[m - 1]
    t_p = sorted(k_p, reverse=True)[m - 1]
    out = []
    for e, p in zip(k_e, k_p):
        above_e, above_p = e >= t_e, p >= t_p
        out.append("I" if above_e and above_p else "II" if above_e else "III" if above_p else "normal")
    return out


def make_fig3a() -> None:
    rng = np.random.default_rng(20)
    base = two_gaussian_features(rng, n_each=100, tight_sigma=0.3)
    pts = np.vstack([base, PLANTED])
    space = oracles.space_scan(pts, k=30)
    labels = classify_by_top_m(space, m=5)

    n_base = len(base)
    got = labels[n_base:]
    counts = {t: labels.count(t) for t in ("I", "II", "III")}
    print(f"fig3a planted labels: {got}  counts: {counts}")
    if got != EXPECTED_TYPES or counts != {"I": 3, "II": 2, "III": 2}:
        raise SystemExit("fig3a fixture drifted: adjust PLANTED placements")

    out = FIXTURE_DIR / "fig3a.csv"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("x,y\n")
        for row in pts:
            fh.write(f"{float(row[0])!r},{float(row[1])!r}\n")
    print(f"wrote {out} ({len(pts)} rows)")


def make_golden_space() -> None:
    rng = np.random.default_rng(21)
    pts = two_gaussian_features(rng, n_each=100, tight_sigma=0.3)
    space = oracles.space_scan(pts, k=30)

    data_out = FIXTURE_DIR / "two_gaussian.csv"
    with open(data_out, "w", encoding="utf-8") as fh:
        fh.write("x,y\n")
        for row in pts:
            fh.write(f"{float(row[0])!r},{float(row[1])!r}\n")

    space_out = FIXTURE_DIR / "two_gaussian_space.csv"
    with open(space_out, "w", encoding="utf-8") as fh:
        fh.write("id,k_e,k_p\n")
        for i, (k_e, k_p) in enumerate(space):
            fh.write(f"{i},{float(k_e)!r},{float(k_p)!r}\n")
    print(f"wrote {data_out} and {space_out} ({len(pts)} rows)")


if __name__ == "__main__":
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    make_fig3a()
    make_golden_space()
