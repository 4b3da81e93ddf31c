"""Single-pixel Hadamard imaging simulator: effective-area pattern ordering,
compressive reconstruction, and image-free projection-curve tracking."""

from .hadamard import (Pattern, build_matrix, fwht, hadamard_element,
                       hadamard_row, pattern_cells, pattern_from_row)
from .optics import (Detector, DetectorModel, SpriteScene, TimingModel,
                     differential_measure, measure, timing_report,
                     validate_frame)
from .ordering import (OrderedSequence, RegionStat, baseline_order,
                       connected_components, eahsi_order, load_order,
                       make_order, max_effective_area, save_order)
from .pgm import read_pgm, write_pgm
from .reconstruct import (QualityReport, Spectrum, acquire_spectrum, psnr,
                          rate_sweep, reconstruct, rmse, write_quality_csv)
from .tracking import (AxisDetection, BoundaryEstimate, FrameEstimate,
                       FrameRecord, GradientCurve, ProjectionCurve,
                       SubPattern, TrackRecord, build_priors,
                       calibrate_thresholds, classify_motion,
                       decompose_subpatterns, estimate_frame, gradient,
                       gradient_difference, pcgd_compute,
                       reconstruct_projection_curve, split_display_budget,
                       top2, track_frames, track_sequence)

__version__ = "0.1.0"
