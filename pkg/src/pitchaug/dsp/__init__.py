"""Signal processing core: pitch tracking, PSOLA, formant and VTLP warps."""
from .buffer import AudioBuffer
from .pitch import (
    DEFAULT_CEILING_HZ,
    DEFAULT_FLOOR_HZ,
    PitchContour,
    PitchMarks,
    detect_pitch_marks,
    estimate_pitch_contour,
    mean_f0,
    median_f0,
)
from .psola import psola_resynthesize, shift_f0, shift_formants
from .resample import sinc_resample
from .vtlp import sample_warp_factor, vtlp_warp

__all__ = [
    "AudioBuffer",
    "PitchContour",
    "PitchMarks",
    "DEFAULT_FLOOR_HZ",
    "DEFAULT_CEILING_HZ",
    "estimate_pitch_contour",
    "median_f0",
    "mean_f0",
    "detect_pitch_marks",
    "psola_resynthesize",
    "shift_f0",
    "shift_formants",
    "sinc_resample",
    "vtlp_warp",
    "sample_warp_factor",
]
