"""Command-line surface: gen-order, reconstruct, track, bench.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 internal
invariant violation. The SPX_CACHE_DIR environment variable overrides the
ordering cache location.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import tracking
from .config import ConfigError, load_config
from .optics import Detector, TimingModel, timing_report
from .ordering import (ORDER_METHODS, OrderedSequence, load_order, make_order,
                       save_order)
from .pgm import read_pgm, write_pgm
from .reconstruct import (QualityReport, acquire_spectrum, psnr, rmse,
                          reconstruct, write_quality_csv)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INTERNAL = 4

# Orderings at or above this side are worth caching (n=128 scans 16384
# patterns); smaller ones are cheaper to recompute than to stat.
CACHE_MIN_SIDE = 64


def cache_dir() -> Path:
    env = os.environ.get("SPX_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "spxtrack"


def get_order(n: int, method: str, connectivity: int = 4,
              seed: int | None = None) -> OrderedSequence:
    """Ordering with a disk cache keyed by (n, method, connectivity[, seed])."""
    if method not in ORDER_METHODS:
        raise ConfigError(f"unknown ordering method {method!r}")
    if method == "random" and seed is None:
        raise ConfigError("random ordering requires --seed")
    if n < CACHE_MIN_SIDE:
        return make_order(n, method, seed=seed, connectivity=connectivity)
    key = f"order_n{n}_{method}_c{connectivity}"
    if method == "random":
        key += f"_s{seed}"
    path = cache_dir() / f"{key}.txt"
    if path.exists():
        return load_order(path)
    seq = make_order(n, method, seed=seed, connectivity=connectivity)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_order(seq, path)
    return seq


def cmd_gen_order(args) -> int:
    seq = get_order(args.n, args.method, connectivity=args.connectivity,
                    seed=args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_order(seq, out)
    print(f"wrote {out} ({seq.n * seq.n} indices, method={seq.method})")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    cfg = load_config(args.config, _overrides(args))
    methods = cfg.methods or [cfg.method]
    if not cfg.images:
        raise ConfigError("reconstruct needs at least one image in config")
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    reports = []
    for image_rel in cfg.images:
        path = cfg.resolve(image_rel)
        if not path.exists():
            raise ConfigError(f"missing scene file {path}")
        frame = read_pgm(path).astype(np.float64)
        if frame.shape != (cfg.n, cfg.n):
            raise ConfigError(
                f"{path}: shape {frame.shape} != ({cfg.n}, {cfg.n})")
        stem = path.stem
        for method in methods:
            seq = get_order(cfg.n, method, connectivity=cfg.connectivity,
                            seed=cfg.seed)
            det = Detector(cfg.detector_model())
            det.calibrate(frame)
            for rate in cfg.rates:
                budget = int(round(rate * cfg.n * cfg.n))
                spec = acquire_spectrum(frame, seq, budget, det)
                img = reconstruct(spec)
                reports.append(QualityReport(
                    method=method, sampling_rate=rate,
                    psnr_db=psnr(img, frame), rmse=rmse(img, frame)))
                write_pgm(out / f"{stem}_{method}_{rate:g}.pgm", img)
    write_quality_csv(out / "report.csv", reports)
    print(f"wrote {out}/report.csv ({len(reports)} rows)")
    return EXIT_OK


def _track_csv(path, track) -> None:
    def cell(v):
        return "" if v is None else repr(float(v))

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frame", "state", "x1", "x2", "y1", "y2",
                         "cx", "cy", "bx", "by"])
        for r in track.records:
            writer.writerow([r.frame, r.state] +
                            [cell(v) for v in (r.x1, r.x2, r.y1, r.y2,
                                               r.cx, r.cy, r.bx, r.by)])


def cmd_track(args) -> int:
    cfg = load_config(args.config, _overrides(args))
    scene = cfg.load_scene()
    tm = cfg.timing_model()
    seq = get_order(cfg.n, cfg.method, connectivity=cfg.connectivity,
                    seed=cfg.seed)
    nx, ny = tracking.split_display_budget(cfg.displays_per_frame, cfg.n)
    subs = tracking.decompose_subpatterns(seq, max(nx, ny))
    det = Detector(cfg.detector_model())
    track = tracking.track_sequence(scene, subs["x"][:nx], subs["y"][:ny], det)

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _track_csv(out / "track.csv", track)
    with open(out / "trajectory.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["frame", "cx", "cy"])
        for frame, cx, cy in track.trajectory():
            writer.writerow([frame, repr(float(cx)), repr(float(cy))])
    report = timing_report(tm, cfg.n)
    states = track.states()
    summary = {
        "n": cfg.n,
        "frames": scene.frames,
        "displays_per_frame": cfg.displays_per_frame,
        "fps": report["fps"],
        "time_resolution_s": report["time_resolution_s"],
        "sampling_rate": report["sampling_rate"],
        "motion": track.motion,
        "motion_classifier": "experimental",
        "state_counts": {s: states.count(s) for s in tracking.STATES},
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2,
                                                 sort_keys=True) + "\n")
    print(f"wrote {out}/track.csv, trajectory.csv, summary.json "
          f"(fps={report['fps']:.2f})")
    return EXIT_OK


def cmd_bench(args) -> int:
    n = args.n
    displays = args.displays_per_frame
    report = timing_report(TimingModel(displays_per_frame=displays), n)

    t0 = time.perf_counter()
    seq = make_order(n, "eahsi")
    order_s = time.perf_counter() - t0

    rng = np.random.default_rng(0)
    frame = 255.0 * rng.random((n, n))
    det = Detector()
    budget = max(1, int(round(0.05 * n * n)))
    t0 = time.perf_counter()
    spec = acquire_spectrum(frame, seq, budget, det)
    acquire_s = time.perf_counter() - t0
    t0 = time.perf_counter()
    reconstruct(spec)
    reconstruct_s = time.perf_counter() - t0

    nx, ny = tracking.split_display_budget(displays, n)
    subs = tracking.decompose_subpatterns(seq, max(nx, ny))
    sub_x, sub_y = subs["x"][:nx], subs["y"][:ny]
    prof_x = tracking.profile_matrix(sub_x)
    prof_y = tracking.profile_matrix(sub_y)
    priors = tracking.build_priors(frame, sub_x, sub_y, det)
    ip_x = tracking.measure_subpatterns(sub_x, frame, det)
    ip_y = tracking.measure_subpatterns(sub_y, frame, det)
    repeats = 200
    t0 = time.perf_counter()
    for _ in range(repeats):
        tracking.pcgd_compute(ip_x, ip_y, prof_x, prof_y,
                              priors["x"], priors["y"], 0.0, 0.0)
    pcgd_frame_s = (time.perf_counter() - t0) / repeats

    result = {
        "n": n,
        "displays_per_frame": displays,
        "fps": report["fps"],
        "frame_period_s": report["time_resolution_s"],
        "stages": {
            "order_s": order_s,
            "acquire_s": acquire_s,
            "reconstruct_s": reconstruct_s,
            "pcgd_frame_s": pcgd_frame_s,
        },
        "real_time_ok": pcgd_frame_s < report["time_resolution_s"],
    }
    text = json.dumps(result, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text + "\n")
    print(text)
    if not result["real_time_ok"]:
        print("per-frame compute exceeds the frame period", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def _overrides(args) -> dict:
    keys = ("n", "method", "rates", "displays_per_frame", "noise_sigma",
            "seed", "out")
    return {k: getattr(args, k, None) for k in keys}


def _parse_rates(text: str):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad rates list {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spxtrack",
        description="Single-pixel Hadamard imaging and image-free tracking "
                    "simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-order", help="write a pattern ordering file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--connectivity", type=int, default=4, choices=(4, 8))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_order)

    p = sub.add_parser("reconstruct",
                       help="rate sweep: images + quality report CSV")
    p.add_argument("--config", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--method", default=None)
    p.add_argument("--rates", type=_parse_rates, default=None)
    p.add_argument("--noise-sigma", dest="noise_sigma", type=float,
                   default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("track", help="track a sprite scene")
    p.add_argument("--config", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--method", default=None)
    p.add_argument("--displays-per-frame", dest="displays_per_frame",
                   type=int, default=None)
    p.add_argument("--noise-sigma", dest="noise_sigma", type=float,
                   default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("bench", help="wall-clock stage benchmarks")
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--displays-per-frame", dest="displays_per_frame",
                   type=int, default=210)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
