"""TD-PSOLA resynthesis and the f0 / formant shifting operations built on it.

f0 shifting scales the whole voiced contour by the ratio of the desired
median to the measured one and resynthesizes. Formant shifting runs the
three-step chain: relabel the sampling rate by beta (all frequencies and
1/duration scale by beta), undo the f0 and duration change with PSOLA
while the spectral envelope stays scaled, then resample back to the
original rate with the windowed-sinc resampler.
"""
from __future__ import annotations

import numpy as np

from ..errors import ScaleRangeError
from .buffer import AudioBuffer
from .pitch import (
    DEFAULT_CEILING_HZ,
    DEFAULT_FLOOR_HZ,
    PitchMarks,
    detect_pitch_marks,
    estimate_pitch_contour,
    median_f0,
)
from .resample import sinc_resample

SCALE_MIN = 0.25
SCALE_MAX = 4.0
BETA_MIN = 0.5
BETA_MAX = 2.0
# below this overlap-add window mass, leave samples unnormalized to avoid
# blowing up grain edges in low-overlap (strong pitch-lowering) regions
_WSUM_FLOOR = 0.3
# grain half-width in local periods; >1 narrows the spectral smoothing the
# windowing applies, keeping the envelope steadier under repitching
_GRAIN_HALF_PERIODS = 1.25


def _check_scale(name: str, value: np.ndarray | float):
    arr = np.atleast_1d(np.asarray(value, dtype=np.float64))
    if np.any(arr < SCALE_MIN) or np.any(arr > SCALE_MAX):
        raise ScaleRangeError(
            f"{name} out of supported range [{SCALE_MIN}, {SCALE_MAX}]"
        )


def _local_periods(epochs: np.ndarray) -> np.ndarray:
    d = np.diff(epochs).astype(np.float64)
    periods = np.empty(len(epochs))
    periods[0] = d[0]
    periods[-1] = d[-1]
    if len(epochs) > 2:
        periods[1:-1] = np.minimum(d[:-1], d[1:])
    return np.maximum(periods, 2.0)


def _psola_core(
    x: np.ndarray,
    epochs: np.ndarray,
    voiced: np.ndarray,
    f0_scale: np.ndarray,
    time_scale: float,
) -> np.ndarray:
    n = len(x)
    out_len = int(round(n * time_scale))
    out = np.zeros(out_len)
    wsum = np.zeros(out_len)
    periods = _local_periods(epochs)
    # unvoiced grains keep their spacing: no period modification
    steps = np.where(voiced, periods / f0_scale, periods)

    s = epochs[0] * time_scale
    while s < out_len:
        a = s / time_scale
        i = int(np.searchsorted(epochs, a))
        if i >= len(epochs):
            i = len(epochs) - 1
        elif i > 0 and a - epochs[i - 1] < epochs[i] - a:
            i -= 1
        half = int(periods[i] * _GRAIN_HALF_PERIODS)
        grain_lo = epochs[i] - half
        grain_hi = epochs[i] + half + 1
        window = np.hanning(2 * half + 1)
        src_lo = max(grain_lo, 0)
        src_hi = min(grain_hi, n)
        w = window[src_lo - grain_lo : len(window) - (grain_hi - src_hi)]
        grain = x[src_lo:src_hi] * w

        center = int(round(s))
        dst_lo = center - (epochs[i] - src_lo)
        dst_hi = dst_lo + len(grain)
        cut_lo = max(dst_lo, 0)
        cut_hi = min(dst_hi, out_len)
        if cut_hi > cut_lo:
            gs = cut_lo - dst_lo
            out[cut_lo:cut_hi] += grain[gs : gs + (cut_hi - cut_lo)]
            wsum[cut_lo:cut_hi] += w[gs : gs + (cut_hi - cut_lo)]
        s += max(steps[i], 1.0)

    out /= np.maximum(wsum, _WSUM_FLOOR)
    return np.clip(out, -1.0, 1.0)


def psola_resynthesize(
    audio: AudioBuffer,
    marks: PitchMarks,
    f0_scale,
    time_scale: float = 1.0,
) -> AudioBuffer:
    """Overlap-add resynthesis with per-epoch pitch and global time scaling.

    ``f0_scale`` is a scalar or a per-epoch sequence; it only modifies the
    spacing of voiced grains. Output duration is ``time_scale`` times the
    input duration to within one pitch period.
    """
    _check_scale("f0 scale", f0_scale)
    _check_scale("time scale", time_scale)
    if len(marks) < 2:
        raise ValueError("need at least two pitch marks for resynthesis")
    scale = np.broadcast_to(
        np.asarray(f0_scale, dtype=np.float64), (len(marks),)
    )
    y = _psola_core(audio.samples, marks.epochs, marks.voiced, scale, float(time_scale))
    return AudioBuffer(y, audio.sample_rate)


def shift_f0(
    audio: AudioBuffer,
    target_median: float,
    floor_hz: float = DEFAULT_FLOOR_HZ,
    ceiling_hz: float = DEFAULT_CEILING_HZ,
) -> AudioBuffer:
    """Scale the voiced f0 contour so its median lands on ``target_median``.

    Raises UnvoicedAudioError when the input has no voiced frames and
    ScaleRangeError when the implied ratio leaves [0.25, 4].
    """
    contour = estimate_pitch_contour(audio, floor_hz, ceiling_hz)
    current = median_f0(contour)
    alpha = target_median / current
    _check_scale("f0 scale", alpha)
    marks = detect_pitch_marks(audio, contour)
    return psola_resynthesize(audio, marks, alpha, 1.0)


def shift_formants(
    audio: AudioBuffer,
    beta: float,
    floor_hz: float = DEFAULT_FLOOR_HZ,
    ceiling_hz: float = DEFAULT_CEILING_HZ,
) -> AudioBuffer:
    """Scale the spectral envelope by ``beta``, keeping f0 and duration.

    Sampling-rate relabeling scales everything by beta; PSOLA with
    time_scale=beta and f0_scale=1/beta restores duration and f0; the
    final sinc resampling returns to the original rate.
    """
    if not (BETA_MIN <= beta <= BETA_MAX):
        raise ScaleRangeError(f"beta {beta} outside [{BETA_MIN}, {BETA_MAX}]")
    sr = audio.sample_rate
    contour = estimate_pitch_contour(audio, floor_hz, ceiling_hz)
    marks = detect_pitch_marks(audio, contour)
    if len(marks) < 2:
        raise ValueError("audio too short for formant shifting")
    scale = np.full(len(marks), 1.0 / beta)
    y = _psola_core(audio.samples, marks.epochs, marks.voiced, scale, beta)
    relabeled = AudioBuffer(y, int(round(beta * sr)))
    return sinc_resample(relabeled, sr)
