import math

import numpy as np
import pytest

from oracles import naive_transform
from spxtrack.optics import Detector, DetectorModel
from spxtrack.ordering import make_order
from spxtrack.reconstruct import (acquire_spectrum, psnr, rate_sweep,
                                  reconstruct, rmse, write_quality_csv)


def full_budget_spectrum(frame, method="natural"):
    n = frame.shape[0]
    seq = make_order(n, method)
    return acquire_spectrum(frame, seq, n * n, Detector())


class TestAcquire:
    def test_full_budget_matches_naive_transform(self):
        frame = np.random.default_rng(0).random((4, 4)) * 200
        spec = full_budget_spectrum(frame)
        expected = naive_transform(frame.reshape(-1))
        assert np.allclose(spec.coefficients, expected)
        assert spec.measured.all()

    def test_partial_budget_marks_only_ordered_prefix(self):
        frame = np.random.default_rng(1).random((4, 4))
        seq = make_order(4, "eahsi")
        spec = acquire_spectrum(frame, seq, 5, Detector())
        assert set(np.flatnonzero(spec.measured)) == set(seq.order[:5])
        assert np.all(spec.coefficients[~spec.measured] == 0.0)
        assert spec.sampling_rate == 5 / 16

    def test_zeroth_coefficient_is_total_intensity(self):
        frame = np.random.default_rng(2).random((8, 8))
        seq = make_order(8, "natural")
        spec = acquire_spectrum(frame, seq, 1, Detector())
        assert math.isclose(spec.coefficients[0], frame.sum())

    def test_budget_out_of_range(self):
        seq = make_order(2, "natural")
        with pytest.raises(ValueError):
            acquire_spectrum(np.zeros((2, 2)), seq, 5, Detector())

    def test_frame_sequence_mismatch(self):
        seq = make_order(4, "natural")
        with pytest.raises(ValueError):
            acquire_spectrum(np.zeros((2, 2)), seq, 1, Detector())


class TestReconstruct:
    @pytest.mark.parametrize("n", [2, 4, 8, 16])
    def test_full_budget_is_exact(self, n):
        frame = np.random.default_rng(n).random((n, n)) * 255
        img = reconstruct(full_budget_spectrum(frame))
        assert np.allclose(img, frame, atol=1e-9)

    def test_order_does_not_change_full_reconstruction(self):
        frame = np.random.default_rng(3).random((8, 8))
        imgs = [reconstruct(full_budget_spectrum(frame, m))
                for m in ("natural", "eahsi")]
        assert np.allclose(imgs[0], imgs[1])

    def test_partial_error_shrinks_with_budget(self):
        frame = np.random.default_rng(4).random((8, 8)) * 255
        seq = make_order(8, "eahsi")
        det = Detector()
        errs = [rmse(reconstruct(acquire_spectrum(frame, seq, b, det)), frame)
                for b in (8, 24, 64)]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 1e-9


class TestScores:
    def test_rmse_example(self):
        assert rmse([[0.0, 0.0]], [[3.0, 4.0]]) == pytest.approx(
            math.sqrt(12.5))

    def test_rmse_shape_mismatch(self):
        with pytest.raises(ValueError):
            rmse(np.zeros((2, 2)), np.zeros((2, 3)))

    def test_psnr_example(self):
        # rmse 25.5 against peak 255 is exactly 20 dB.
        assert psnr([[0.0]], [[25.5]]) == pytest.approx(20.0)

    def test_psnr_identical_is_inf(self):
        assert psnr(np.ones((2, 2)), np.ones((2, 2))) == math.inf

    def test_psnr_bad_peak(self):
        with pytest.raises(ValueError):
            psnr([[1.0]], [[2.0]], peak=0.0)


class TestSweep:
    def test_reports_and_csv(self, tmp_path):
        frame = np.random.default_rng(5).random((8, 8)) * 255
        seq = make_order(8, "eahsi")
        reports = rate_sweep(frame, seq, [0.25, 1.0], Detector())
        assert [r.sampling_rate for r in reports] == [0.25, 1.0]
        assert reports[0].method == "eahsi"
        assert reports[1].psnr_db > 200.0
        path = tmp_path / "report.csv"
        write_quality_csv(path, reports)
        lines = path.read_text().splitlines()
        assert lines[0] == "method,rate,psnr_db,rmse"
        assert len(lines) == 3
        assert lines[1].startswith("eahsi,0.25,")

    def test_bad_rate(self):
        seq = make_order(4, "natural")
        with pytest.raises(ValueError):
            rate_sweep(np.zeros((4, 4)), seq, [1.5], Detector())

    def test_noise_degrades_psnr(self):
        frame = np.random.default_rng(6).random((8, 8)) * 200 + 20
        seq = make_order(8, "eahsi")
        clean = rate_sweep(frame, seq, [1.0], Detector())[0]
        noisy_det = Detector(DetectorModel(noise_sigma=0.02, rng_seed=7))
        noisy_det.calibrate(frame)
        noisy = rate_sweep(frame, seq, [1.0], noisy_det)[0]
        assert clean.psnr_db > 200.0
        assert noisy.psnr_db < 60.0
