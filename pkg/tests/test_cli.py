import csv
import json

import numpy as np
import pytest

from spxtrack.cli import main
from spxtrack.ordering import load_order, make_order
from spxtrack.pgm import read_pgm, write_pgm


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("SPX_CACHE_DIR", str(tmp_path / "cache"))


class TestGenOrder:
    def test_writes_loadable_ordering(self, tmp_path):
        out = tmp_path / "order.txt"
        rc = main(["gen-order", "--n", "8", "--method", "eahsi",
                   "--out", str(out)])
        assert rc == 0
        seq = load_order(out)
        assert seq.method == "eahsi"
        assert np.array_equal(seq.order, make_order(8, "eahsi").order)
        header = out.read_text().splitlines()[0]
        assert header == "# spx-order v1 n=8 method=eahsi connectivity=4"

    def test_random_needs_seed(self, tmp_path, capsys):
        rc = main(["gen-order", "--n", "8", "--method", "random",
                   "--out", str(tmp_path / "o.txt")])
        assert rc == 2
        assert "seed" in capsys.readouterr().err

    def test_random_seed_in_header(self, tmp_path):
        out = tmp_path / "o.txt"
        rc = main(["gen-order", "--n", "4", "--method", "random",
                   "--seed", "3", "--out", str(out)])
        assert rc == 0
        seq = load_order(out)
        assert seq.seed == 3
        assert np.array_equal(seq.order, make_order(4, "random",
                                                    seed=3).order)

    def test_unknown_method(self, tmp_path):
        rc = main(["gen-order", "--n", "8", "--method", "fancy",
                   "--out", str(tmp_path / "o.txt")])
        assert rc == 2

    def test_cache_file_created_for_large_n(self, tmp_path):
        cache = tmp_path / "cache"
        out = tmp_path / "o.txt"
        assert main(["gen-order", "--n", "64", "--method", "natural",
                     "--out", str(out)]) == 0
        cached = cache / "order_n64_natural_c4.txt"
        assert cached.exists()
        assert cached.read_bytes() == out.read_bytes()
        # A second run must reuse the cached file untouched.
        before = cached.stat().st_mtime_ns
        assert main(["gen-order", "--n", "64", "--method", "natural",
                     "--out", str(out)]) == 0
        assert cached.stat().st_mtime_ns == before


def write_recon_config(tmp_path, n=8):
    rng = np.random.default_rng(0)
    write_pgm(tmp_path / "img.pgm", rng.integers(0, 256, size=(n, n)))
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "n": n,
        "images": ["img.pgm"],
        "methods": ["eahsi", "natural"],
        "rates": [0.25, 1.0],
        "out": str(tmp_path / "out"),
    }))
    return cfg


class TestReconstruct:
    def test_outputs(self, tmp_path):
        cfg = write_recon_config(tmp_path)
        assert main(["reconstruct", "--config", str(cfg)]) == 0
        out = tmp_path / "out"
        for method in ("eahsi", "natural"):
            for rate in ("0.25", "1"):
                assert (out / f"img_{method}_{rate}.pgm").exists()
        with open(out / "report.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 4
        assert {r["method"] for r in rows} == {"eahsi", "natural"}
        full = [r for r in rows if r["rate"] == "1.0"]
        assert all(float(r["psnr_db"]) > 45.0 for r in full)

    def test_full_rate_image_round_trips(self, tmp_path):
        cfg = write_recon_config(tmp_path)
        assert main(["reconstruct", "--config", str(cfg)]) == 0
        original = read_pgm(tmp_path / "img.pgm")
        rebuilt = read_pgm(tmp_path / "out" / "img_eahsi_1.pgm")
        assert np.array_equal(original, rebuilt)

    def test_flag_overrides_rates(self, tmp_path):
        cfg = write_recon_config(tmp_path)
        assert main(["reconstruct", "--config", str(cfg),
                     "--rates", "0.5"]) == 0
        with open(tmp_path / "out" / "report.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert {r["rate"] for r in rows} == {"0.5"}

    def test_missing_image_is_config_error(self, tmp_path):
        cfg = write_recon_config(tmp_path)
        (tmp_path / "img.pgm").unlink()
        assert main(["reconstruct", "--config", str(cfg)]) == 2

    def test_no_images_is_config_error(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 8}))
        assert main(["reconstruct", "--config", str(cfg)]) == 2

    def test_missing_config_file(self, tmp_path):
        assert main(["reconstruct", "--config",
                     str(tmp_path / "nope.json")]) == 2


def write_track_config(tmp_path, n=16):
    write_pgm(tmp_path / "bg.pgm", np.full((n, n), 5, dtype=np.uint8))
    write_pgm(tmp_path / "sprite.pgm", np.full((4, 4), 200, dtype=np.uint8))
    xs = list(range(-6, n + 3))
    rows = "\n".join(f"{t},{x},{n // 2 - 2}" for t, x in enumerate(xs))
    (tmp_path / "traj.csv").write_text(rows + "\n")
    cfg = tmp_path / "scene.json"
    cfg.write_text(json.dumps({
        "n": n,
        "background": "bg.pgm",
        "sprite": "sprite.pgm",
        "trajectory": "traj.csv",
        "timing": {"displays_per_frame": 64},
        "out": str(tmp_path / "out"),
    }))
    return cfg, len(xs)


class TestTrack:
    def test_outputs(self, tmp_path):
        cfg, frames = write_track_config(tmp_path)
        assert main(["track", "--config", str(cfg)]) == 0
        out = tmp_path / "out"
        with open(out / "track.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == frames
        assert rows[0]["state"] == "absent"
        states = {r["state"] for r in rows}
        assert {"entering", "full", "leaving", "gone"} <= states

        summary = json.loads((out / "summary.json").read_text())
        assert summary["n"] == 16 and summary["frames"] == frames
        assert summary["fps"] == pytest.approx(22000 / 64)
        assert summary["sampling_rate"] == pytest.approx(64 / 256)
        assert summary["motion"] == "tangential"
        assert sum(summary["state_counts"].values()) == frames

        with open(out / "trajectory.csv") as fh:
            traj = list(csv.DictReader(fh))
        assert traj
        full_rows = [r for r in rows if r["cx"] != ""]
        assert len(traj) == len(full_rows)

    def test_full_rows_have_complete_boxes(self, tmp_path):
        cfg, _ = write_track_config(tmp_path)
        assert main(["track", "--config", str(cfg)]) == 0
        with open(tmp_path / "out" / "track.csv") as fh:
            rows = list(csv.DictReader(fh))
        for r in rows:
            if r["state"] == "full":
                assert all(r[k] != "" for k in
                           ("x1", "x2", "y1", "y2", "cx", "cy", "bx", "by"))
                assert float(r["x2"]) - float(r["x1"]) == 4.0

    def test_scene_missing_is_config_error(self, tmp_path):
        cfg, _ = write_track_config(tmp_path)
        (tmp_path / "bg.pgm").unlink()
        assert main(["track", "--config", str(cfg)]) == 2


class TestBench:
    def test_small_bench(self, tmp_path, capsys):
        out = tmp_path / "bench.json"
        rc = main(["bench", "--n", "16", "--displays-per-frame", "64",
                   "--out", str(out)])
        assert rc == 0
        result = json.loads(out.read_text())
        assert result["n"] == 16
        assert set(result["stages"]) == {"order_s", "acquire_s",
                                         "reconstruct_s", "pcgd_frame_s"}
        assert result["real_time_ok"] is True
        printed = json.loads(capsys.readouterr().out)
        assert printed == result
