#!/usr/bin/env python3
"""Regenerate the shipped data/ files: two 128x128 grayscale test images
for the ordering-quality study and a demo tracking scene (textured
background, bright 16x16 sprite crossing in 40 frames).

Deterministic; run from the repo root: python3 tools/generate_data.py
"""

import json
from pathlib import Path

import numpy as np

from spxtrack.pgm import write_pgm

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
N = 128


def test_images():
    yy, xx = np.mgrid[0:N, 0:N]

    def gauss(cx, cy, s, a):
        return a * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * s * s))

    blobs = 40 + gauss(40, 36, 18, 180) + gauss(90, 80, 24, 140) \
        + gauss(30, 100, 12, 120)
    write_pgm(DATA / "blobs.pgm", np.clip(blobs, 0, 255))

    shapes = 30 + 300 * (xx / N) * (yy / N)
    shapes[30:70, 20:60] = 210
    shapes[(xx - 90) ** 2 + (yy - 40) ** 2 <= 20 ** 2] = 80
    write_pgm(DATA / "shapes.pgm", np.clip(shapes, 0, 255))


def track_scene():
    scene_dir = DATA / "track_scene"
    scene_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(12345)
    background = 10.0 + 20.0 * rng.random((N, N))
    write_pgm(scene_dir / "background.pgm", background)
    write_pgm(scene_dir / "sprite.pgm", np.full((16, 16), 255.0))

    frames = 40
    xs = np.linspace(-20, 132, frames).astype(int)
    lines = ["frame,x,y"] + [f"{t},{xs[t]},56" for t in range(frames)]
    (scene_dir / "trajectory.csv").write_text("\n".join(lines) + "\n")

    config = {
        "n": N,
        "background": "background.pgm",
        "sprite": "sprite.pgm",
        "trajectory": "trajectory.csv",
        "detector": {"noise_sigma": 0.01, "samples_per_display": 10,
                     "seed": 0},
        "timing": {"dmd_rate_hz": 22000, "daq_rate_sps": 500000,
                   "displays_per_frame": 210},
        "ordering": {"method": "eahsi", "connectivity": 4},
        "out": "out/track",
    }
    (scene_dir / "scene.json").write_text(json.dumps(config, indent=2) + "\n")

    recon = {
        "n": N,
        "images": ["blobs.pgm", "shapes.pgm"],
        "methods": ["eahsi", "natural", "random"],
        "rates": [0.05, 0.10, 0.20],
        "detector": {"noise_sigma": 0.0, "seed": 1},
        "out": "out/reconstruct",
    }
    (DATA / "reconstruct.json").write_text(json.dumps(recon, indent=2) + "\n")


if __name__ == "__main__":
    DATA.mkdir(parents=True, exist_ok=True)
    test_images()
    track_scene()
    print(f"wrote data files under {DATA}")
