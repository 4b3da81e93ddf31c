"""Image reconstruction from partial differential Hadamard spectra, with
PSNR/RMSE scoring used to compare ordering strategies."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .hadamard import fwht, hadamard_row
from .optics import Detector, validate_frame
from .ordering import OrderedSequence


@dataclass
class Spectrum:
    """Partial Hadamard spectrum; unmeasured coefficients are exactly 0."""

    n: int
    coefficients: np.ndarray
    measured: np.ndarray

    @property
    def sampling_rate(self) -> float:
        return float(self.measured.sum()) / (self.n * self.n)


def acquire_spectrum(frame, seq: OrderedSequence, budget: int,
                     det: Detector) -> Spectrum:
    """Differentially measure the first `budget` patterns of seq."""
    f = validate_frame(frame)
    n = f.shape[0]
    if f.shape != (n, n) or n != seq.n:
        raise ValueError("frame shape must be (n, n) matching the sequence")
    n2 = n * n
    if not 0 <= budget <= n2:
        raise ValueError(f"budget {budget} out of range [0, {n2}]")
    coeff = np.zeros(n2)
    measured = np.zeros(n2, dtype=bool)
    for k in seq.order[:budget]:
        cells = (hadamard_row(n2, int(k)) > 0).astype(np.float64)
        pos = det.measure(cells.reshape(n, n), f)
        neg = det.measure((1.0 - cells).reshape(n, n), f)
        coeff[k] = pos - neg
        measured[k] = True
    return Spectrum(n=n, coefficients=coeff, measured=measured)


def reconstruct(spec: Spectrum) -> np.ndarray:
    """Inverse transform: (1/n^2) H_{n^2} . coefficients, row-major reshape."""
    n = spec.n
    img = fwht(spec.coefficients) / (n * n)
    return img.reshape(n, n)


def rmse(img, ref) -> float:
    a, b = np.asarray(img, float), np.asarray(ref, float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.sqrt(np.mean((a - b) ** 2)))


def psnr(img, ref, peak: float = 255.0) -> float:
    """20 log10(peak / rmse) in dB; +inf when the images are identical."""
    if peak <= 0:
        raise ValueError("peak must be positive")
    err = rmse(img, ref)
    if err == 0.0:
        return math.inf
    return 20.0 * math.log10(peak / err)


@dataclass
class QualityReport:
    method: str
    sampling_rate: float
    psnr_db: float
    rmse: float


def rate_sweep(frame, seq: OrderedSequence, rates, det: Detector,
               peak: float = 255.0) -> list[QualityReport]:
    """Acquire, reconstruct and score the frame at each sampling rate."""
    f = validate_frame(frame)
    n2 = seq.n * seq.n
    reports = []
    for rate in rates:
        if not 0 < rate <= 1:
            raise ValueError(f"rate {rate} outside (0, 1]")
        budget = int(round(rate * n2))
        spec = acquire_spectrum(f, seq, budget, det)
        img = reconstruct(spec)
        reports.append(QualityReport(
            method=seq.method,
            sampling_rate=rate,
            psnr_db=psnr(img, f, peak),
            rmse=rmse(img, f),
        ))
    return reports


def write_quality_csv(path, reports) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "rate", "psnr_db", "rmse"])
        for r in reports:
            writer.writerow([r.method, repr(float(r.sampling_rate)),
                             repr(float(r.psnr_db)), repr(float(r.rmse))])
