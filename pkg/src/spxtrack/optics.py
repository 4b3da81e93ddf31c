"""Simulated single-pixel optical bench: scene synthesis, detector model,
and DMD/DAQ timing arithmetic.

Coordinate convention: x indexes the first array axis (rows), y the second
(columns). Scene intensities are nonnegative reals in arbitrary radiometric
units; the detector reading is the pattern-scene inner product scaled by gain,
optionally corrupted by additive Gaussian noise averaged over several DAQ
samples per display.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hadamard import Pattern


def validate_frame(frame: np.ndarray) -> np.ndarray:
    f = np.asarray(frame, dtype=np.float64)
    if f.ndim != 2:
        raise ValueError("frame must be 2-D")
    if np.any(f < 0):
        raise ValueError("frame intensities must be nonnegative")
    return f


@dataclass
class DetectorModel:
    """Single-pixel detector parameters.

    noise_sigma is the Gaussian std-dev of one DAQ sample, as a fraction of
    the mean noiseless measurement of the all-ones pattern on the calibration
    background; samples_per_display draws are averaged per display.
    """

    gain: float = 1.0
    noise_sigma: float = 0.0
    samples_per_display: int = 10
    rng_seed: int = 0

    def __post_init__(self):
        if self.gain <= 0:
            raise ValueError("gain must be positive")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        if self.samples_per_display < 1:
            raise ValueError("samples_per_display must be >= 1")


class Detector:
    """Stateful measurement engine around a DetectorModel.

    Noise draws use a counter-based Philox stream keyed by (seed, display
    index), so results are identical regardless of evaluation order; the
    display counter advances once per display.
    """

    def __init__(self, model: DetectorModel | None = None):
        self.model = model if model is not None else DetectorModel()
        self.reference_mean = 0.0
        self._display_counter = 0

    def calibrate(self, background) -> float:
        """Fix the noise reference: noiseless all-ones measurement of bg."""
        bg = validate_frame(background)
        self.reference_mean = self.model.gain * float(bg.sum())
        return self.reference_mean

    def _noise(self, display_index: int) -> float:
        bit = np.random.Philox(key=self.model.rng_seed,
                               counter=[0, display_index, 0, 0])
        rng = np.random.Generator(bit)
        sigma = self.model.noise_sigma * self.reference_mean
        return float(rng.normal(0.0, sigma,
                                self.model.samples_per_display).mean())

    def measure(self, mask, frame, display_index: int | None = None) -> float:
        """Averaged detector reading for one displayed binary mask."""
        m = np.asarray(mask, dtype=np.float64)
        f = np.asarray(frame, dtype=np.float64)
        if m.shape != f.shape:
            raise ValueError(f"mask shape {m.shape} != frame shape {f.shape}")
        noiseless = self.model.gain * float(np.vdot(m, f))
        if self.model.noise_sigma == 0.0:
            return noiseless
        if self.reference_mean == 0.0:
            raise RuntimeError("noisy detector used before calibrate()")
        if display_index is None:
            display_index = self._display_counter
            self._display_counter += 1
        return noiseless + self._noise(display_index)

    def differential_measure(self, p, frame) -> float:
        """Reading for a pattern minus reading for its complement.

        Accepts a positive-polarity Pattern or a raw binary mask; at
        noise_sigma=0 this equals the +/-1-pattern inner product times gain.
        """
        if isinstance(p, Pattern):
            if p.polarity != "positive":
                raise ValueError("differential_measure needs positive polarity")
            cells = p.cells
        else:
            cells = np.asarray(p)
        pos = self.measure(cells, frame)
        neg = self.measure(1 - cells, frame)
        return pos - neg


def measure(mask, frame, det: Detector) -> float:
    return det.measure(mask, frame)


def differential_measure(p, frame, det: Detector) -> float:
    return det.differential_measure(p, frame)


@dataclass
class SpriteScene:
    """A background with a sprite composited along a per-frame trajectory.

    trajectory[t] = (x, y) top-left offset of the sprite in frame t; offsets
    may place the sprite partially or fully outside the scene, in which case
    compositing clips at the borders. Within the sprite mask the sprite
    intensity replaces the background.
    """

    background: np.ndarray
    sprite: np.ndarray
    trajectory: np.ndarray
    mask: np.ndarray | None = None

    def __post_init__(self):
        self.background = validate_frame(self.background)
        self.sprite = validate_frame(self.sprite)
        self.trajectory = np.asarray(self.trajectory, dtype=np.int64)
        if self.trajectory.ndim != 2 or self.trajectory.shape[1] != 2:
            raise ValueError("trajectory must be (frames, 2)")
        if self.mask is None:
            self.mask = self.sprite > 0
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.mask.shape != self.sprite.shape:
            raise ValueError("mask shape must match sprite shape")

    @property
    def frames(self) -> int:
        return self.trajectory.shape[0]

    @property
    def side(self) -> int:
        return self.background.shape[0]

    def _clip(self, t: int):
        h, w = self.sprite.shape
        hh, ww = self.background.shape
        x, y = self.trajectory[t]
        x0, x1 = max(x, 0), min(x + h, hh)
        y0, y1 = max(y, 0), min(y + w, ww)
        if x0 >= x1 or y0 >= y1:
            return None
        return (x0, x1, y0, y1), (x0 - x, x1 - x, y0 - y, y1 - y)

    def render_frame(self, t: int) -> np.ndarray:
        if not 0 <= t < self.frames:
            raise IndexError(f"frame {t} out of range [0, {self.frames})")
        out = self.background.copy()
        clip = self._clip(t)
        if clip is None:
            return out
        (x0, x1, y0, y1), (sx0, sx1, sy0, sy1) = clip
        sub_mask = self.mask[sx0:sx1, sy0:sy1]
        region = out[x0:x1, y0:y1]
        region[sub_mask] = self.sprite[sx0:sx1, sy0:sy1][sub_mask]
        return out

    def true_box(self, t: int):
        """Ground-truth visible bounding box (x1, x2, y1, y2), half-open;
        None when the sprite is entirely outside the scene."""
        if not 0 <= t < self.frames:
            raise IndexError(f"frame {t} out of range [0, {self.frames})")
        clip = self._clip(t)
        if clip is None:
            return None
        (x0, x1, y0, y1), _ = clip
        return (int(x0), int(x1), int(y0), int(y1))


@dataclass
class TimingModel:
    """DMD refresh / DAQ sampling arithmetic."""

    displays_per_frame: int
    dmd_rate_hz: float = 22000.0
    daq_rate_sps: float = 500000.0

    def __post_init__(self):
        if self.displays_per_frame < 1:
            raise ValueError("displays_per_frame must be >= 1")
        if self.dmd_rate_hz <= 0 or self.daq_rate_sps <= 0:
            raise ValueError("rates must be positive")

    def validate_sampling(self, samples_per_display: int) -> None:
        """The DAQ must supply enough samples per pattern display."""
        if self.daq_rate_sps / self.dmd_rate_hz < samples_per_display:
            raise ValueError(
                "DAQ rate too low: "
                f"{self.daq_rate_sps}/{self.dmd_rate_hz} < {samples_per_display}"
            )


def timing_report(tm: TimingModel, n: int) -> dict:
    """Frame rate, time resolution and sampling rate for side-n scenes.

    Every display, including both halves of a differential pair, counts
    against the n^2 full-pattern budget.
    """
    fps = tm.dmd_rate_hz / tm.displays_per_frame
    return {
        "fps": fps,
        "time_resolution_s": 1.0 / fps,
        "sampling_rate": tm.displays_per_frame / (n * n),
    }
