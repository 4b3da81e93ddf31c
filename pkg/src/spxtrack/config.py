"""Run configuration: JSON config files plus flag overrides, and scene
bundle loading (PGM background/sprite + CSV trajectory)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .hadamard import is_power_of_two
from .optics import DetectorModel, SpriteScene, TimingModel
from .ordering import ORDER_METHODS
from .pgm import read_pgm


class ConfigError(Exception):
    """Invalid configuration or arguments; maps to exit code 2."""


def load_trajectory_csv(path) -> np.ndarray:
    """Parse "frame,x,y" rows into an (frames, 2) array of top-left offsets.
    Rows must be dense in frame index starting at 0; a header is optional."""
    rows = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if parts[0] == "frame":
            continue
        if len(parts) != 3:
            raise ConfigError(f"{path}: bad trajectory row {line!r}")
        rows[int(parts[0])] = (int(parts[1]), int(parts[2]))
    if sorted(rows) != list(range(len(rows))):
        raise ConfigError(f"{path}: trajectory frames must be 0..F-1 dense")
    return np.array([rows[t] for t in range(len(rows))], dtype=np.int64)


@dataclass
class RunConfig:
    """Validated parameters for the reconstruct/track commands."""

    n: int = 128
    method: str = "eahsi"
    connectivity: int = 4
    rates: list = field(default_factory=lambda: [0.05, 0.10, 0.20])
    methods: list | None = None
    images: list = field(default_factory=list)
    background: str | None = None
    sprite: str | None = None
    trajectory: str | None = None
    sprite_value: float | None = None
    gain: float = 1.0
    noise_sigma: float = 0.0
    samples_per_display: int = 10
    seed: int = 0
    dmd_rate_hz: float = 22000.0
    daq_rate_sps: float = 500000.0
    displays_per_frame: int = 210
    out: str = "out"
    base_dir: Path = field(default_factory=Path)

    def validate(self) -> "RunConfig":
        if not is_power_of_two(self.n):
            raise ConfigError(f"n must be a power of two, got {self.n}")
        for m in (self.methods or [self.method]):
            if m not in ORDER_METHODS:
                raise ConfigError(f"unknown ordering method {m!r}")
        if self.connectivity not in (4, 8):
            raise ConfigError(f"connectivity must be 4 or 8")
        for r in self.rates:
            if not 0 < r <= 1:
                raise ConfigError(f"rate {r} outside (0, 1]")
        if self.noise_sigma < 0:
            raise ConfigError("noise_sigma must be nonnegative")
        if self.displays_per_frame < 1:
            raise ConfigError("displays_per_frame must be >= 1")
        return self

    def resolve(self, rel: str | None) -> Path | None:
        if rel is None:
            return None
        p = Path(rel)
        return p if p.is_absolute() else self.base_dir / p

    def detector_model(self) -> DetectorModel:
        try:
            return DetectorModel(gain=self.gain, noise_sigma=self.noise_sigma,
                                 samples_per_display=self.samples_per_display,
                                 rng_seed=self.seed)
        except ValueError as e:
            raise ConfigError(str(e)) from e

    def timing_model(self) -> TimingModel:
        try:
            tm = TimingModel(displays_per_frame=self.displays_per_frame,
                             dmd_rate_hz=self.dmd_rate_hz,
                             daq_rate_sps=self.daq_rate_sps)
            tm.validate_sampling(self.samples_per_display)
        except ValueError as e:
            raise ConfigError(str(e)) from e
        return tm

    def load_scene(self) -> SpriteScene:
        for name in ("background", "sprite", "trajectory"):
            if getattr(self, name) is None:
                raise ConfigError(f"scene config missing {name!r}")
        bg_path = self.resolve(self.background)
        sprite_path = self.resolve(self.sprite)
        traj_path = self.resolve(self.trajectory)
        for p in (bg_path, sprite_path, traj_path):
            if not p.exists():
                raise ConfigError(f"missing scene file {p}")
        bg = read_pgm(bg_path).astype(np.float64)
        sprite = read_pgm(sprite_path).astype(np.float64)
        if self.sprite_value is not None:
            sprite = np.where(sprite > 0, float(self.sprite_value), 0.0)
        if bg.shape != (self.n, self.n):
            raise ConfigError(
                f"background shape {bg.shape} != ({self.n}, {self.n})")
        traj = load_trajectory_csv(traj_path)
        return SpriteScene(background=bg, sprite=sprite, trajectory=traj)


_FLAT_KEYS = {"n", "method", "connectivity", "rates", "methods", "images",
              "background", "sprite", "trajectory", "sprite_value", "out",
              "displays_per_frame"}
_DETECTOR_KEYS = {"gain", "noise_sigma", "samples_per_display", "seed"}
_TIMING_KEYS = {"dmd_rate_hz", "daq_rate_sps", "displays_per_frame"}


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from an optional JSON file plus overrides
    (overrides win). Relative paths resolve against the config file dir."""
    cfg = RunConfig()
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {p}")
        try:
            raw = json.loads(p.read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"{p}: invalid JSON: {e}") from e
        cfg.base_dir = p.parent
        for key, value in raw.items():
            if key == "detector":
                for k, v in value.items():
                    if k not in _DETECTOR_KEYS:
                        raise ConfigError(f"unknown detector key {k!r}")
                    setattr(cfg, k if k != "seed" else "seed", v)
            elif key == "timing":
                for k, v in value.items():
                    if k not in _TIMING_KEYS:
                        raise ConfigError(f"unknown timing key {k!r}")
                    setattr(cfg, k, v)
            elif key == "ordering":
                if "method" in value:
                    cfg.method = value["method"]
                if "connectivity" in value:
                    cfg.connectivity = value["connectivity"]
            elif key in _FLAT_KEYS:
                setattr(cfg, key, value)
            else:
                raise ConfigError(f"unknown config key {key!r}")
    for key, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, key, value)
    return cfg.validate()
