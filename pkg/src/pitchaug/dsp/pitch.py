"""Autocorrelation pitch tracking, contour statistics and pitch-mark placement.

The tracker works on 40 ms Hann-windowed frames with a 10 ms hop. Each
frame's autocorrelation is normalized by lag zero and corrected by the
window's own autocorrelation so a perfectly periodic frame scores ~1 at
its period lag. A frame is voiced when the best corrected peak in the
lag search range reaches the voicing threshold.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InsufficientFramesError, UnvoicedAudioError
from .buffer import AudioBuffer

DEFAULT_FLOOR_HZ = 75.0
DEFAULT_CEILING_HZ = 500.0
FRAME_WINDOW_S = 0.040
FRAME_HOP_S = 0.010
VOICING_THRESHOLD = 0.45
# a shorter-lag local maximum wins if it reaches this fraction of the
# global maximum; guards against octave errors on pulse-train-like input
OCTAVE_PREFERENCE = 0.85
_ENERGY_FLOOR = 1e-12


@dataclass(frozen=True)
class PitchContour:
    """Framewise f0 estimates; unvoiced frames hold NaN."""

    frame_hop: float
    frame_f0: np.ndarray = field(repr=False)
    voicing_strength: np.ndarray = field(repr=False)

    def __post_init__(self):
        f0 = np.asarray(self.frame_f0, dtype=np.float64)
        vs = np.asarray(self.voicing_strength, dtype=np.float64)
        if f0.shape != vs.shape:
            raise ValueError("frame_f0 and voicing_strength lengths differ")
        object.__setattr__(self, "frame_f0", f0)
        object.__setattr__(self, "voicing_strength", vs)

    def __len__(self) -> int:
        return len(self.frame_f0)

    @property
    def voiced_mask(self) -> np.ndarray:
        return ~np.isnan(self.frame_f0)

    @property
    def voiced_fraction(self) -> float:
        if len(self) == 0:
            return 0.0
        return float(np.mean(self.voiced_mask))


@dataclass(frozen=True)
class PitchMarks:
    """Strictly increasing epoch sample indices with per-epoch voicing."""

    epochs: np.ndarray = field(repr=False)
    voiced: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = np.asarray(self.epochs, dtype=np.int64)
        v = np.asarray(self.voiced, dtype=bool)
        if e.shape != v.shape:
            raise ValueError("epochs and voiced lengths differ")
        if len(e) > 1 and not np.all(np.diff(e) > 0):
            raise ValueError("epochs must be strictly increasing")
        if len(e) and (e[0] < 0):
            raise ValueError("epoch index out of range")
        object.__setattr__(self, "epochs", e)
        object.__setattr__(self, "voiced", v)

    def __len__(self) -> int:
        return len(self.epochs)


def _frame_signal(x: np.ndarray, win: int, hop: int) -> np.ndarray:
    n_frames = 1 + (len(x) - win) // hop
    idx = hop * np.arange(n_frames)[:, None] + np.arange(win)[None, :]
    return x[idx]


def estimate_pitch_contour(
    audio: AudioBuffer,
    floor_hz: float = DEFAULT_FLOOR_HZ,
    ceiling_hz: float = DEFAULT_CEILING_HZ,
) -> PitchContour:
    """Estimate a framewise f0 contour.

    Frames without sufficient periodicity (corrected autocorrelation peak
    below the voicing threshold) are marked unvoiced.
    """
    sr = audio.sample_rate
    if not (0.0 < floor_hz < ceiling_hz < sr / 2):
        raise ValueError(
            f"need 0 < floor < ceiling < Nyquist, got ({floor_hz}, {ceiling_hz}) at {sr} Hz"
        )
    win = int(round(FRAME_WINDOW_S * sr))
    hop = int(round(FRAME_HOP_S * sr))
    if len(audio) < 2 * win:
        raise InsufficientFramesError(
            f"insufficient frames: need at least {2 * win} samples, got {len(audio)}"
        )

    frames = _frame_signal(audio.samples, win, hop)
    frames = frames - frames.mean(axis=1, keepdims=True)
    window = np.hanning(win)
    tapered = frames * window

    nfft = 1 << int(np.ceil(np.log2(2 * win)))
    spec = np.fft.rfft(tapered, nfft)
    acf = np.fft.irfft(np.abs(spec) ** 2, nfft)[:, :win]

    wspec = np.fft.rfft(window, nfft)
    wacf = np.fft.irfft(np.abs(wspec) ** 2, nfft)[:win]
    wacf = wacf / wacf[0]

    lag_min = max(2, int(np.floor(sr / ceiling_hz)))
    lag_max = min(win - 2, int(np.ceil(sr / floor_hz)))

    f0 = np.full(len(frames), np.nan)
    strength = np.zeros(len(frames))
    for i in range(len(frames)):
        r0 = acf[i, 0]
        if r0 < _ENERGY_FLOOR:
            continue
        norm = (acf[i, 1:] / r0) / wacf[1:]
        seg = norm[lag_min - 1 : lag_max]
        gmax = float(seg.max())
        strength[i] = float(np.clip(gmax, 0.0, 1.0))
        if gmax < VOICING_THRESHOLD:
            continue
        interior = seg[1:-1]
        is_peak = (interior >= seg[:-2]) & (interior >= seg[2:])
        peaks = np.nonzero(is_peak & (interior >= OCTAVE_PREFERENCE * gmax))[0] + 1
        if len(peaks) == 0:
            peaks = np.array([int(np.argmax(seg))])
        lag = lag_min + int(peaks[0])
        # parabolic refinement around the chosen lag (norm is 1-indexed)
        k = lag - 1
        if 1 <= k < len(norm) - 1:
            a, b, c = norm[k - 1], norm[k], norm[k + 1]
            denom = a - 2 * b + c
            if denom < 0:
                lag = lag + float(np.clip(0.5 * (a - c) / denom, -1.0, 1.0))
        f0[i] = float(np.clip(sr / lag, floor_hz, ceiling_hz))

    return PitchContour(frame_hop=FRAME_HOP_S, frame_f0=f0, voicing_strength=strength)


def median_f0(contour: PitchContour) -> float:
    """Median f0 over voiced frames only (even count: mean of the two central)."""
    voiced = contour.frame_f0[contour.voiced_mask]
    if len(voiced) == 0:
        raise UnvoicedAudioError("unvoiced input: no voiced frames in contour")
    return float(np.median(voiced))


def mean_f0(contour: PitchContour) -> float:
    """Mean f0 over voiced frames, used for f0-binned error analysis."""
    voiced = contour.frame_f0[contour.voiced_mask]
    if len(voiced) == 0:
        raise UnvoicedAudioError("unvoiced input: no voiced frames in contour")
    return float(np.mean(voiced))


def detect_pitch_marks(audio: AudioBuffer, contour: PitchContour) -> PitchMarks:
    """Place per-period epochs at waveform peaks in voiced regions.

    Unvoiced regions get uniform 10 ms marks. The next voiced epoch is the
    waveform maximum within +/-20% of the local period after the previous
    one, which keeps epoch spacing within 20% of sr / local f0.
    """
    sr = audio.sample_rate
    x = audio.samples
    n = len(x)
    win = int(round(FRAME_WINDOW_S * sr))
    hop = int(round(FRAME_HOP_S * sr))
    n_frames = len(contour)
    voiced = contour.voiced_mask

    def frame_at(pos: float) -> int:
        i = int(round((pos - win / 2) / hop))
        return min(max(i, 0), n_frames - 1)

    epochs: list[int] = []
    flags: list[bool] = []
    prev_voiced = False
    t = 0.0
    while t < n:
        i = frame_at(t)
        if voiced[i]:
            period = sr / contour.frame_f0[i]
            if prev_voiced and epochs:
                lo = epochs[-1] + 0.8 * period
                hi = epochs[-1] + 1.2 * period
            else:
                lo, hi = t, t + period
            lo_i = int(np.floor(lo))
            hi_i = min(int(np.ceil(hi)) + 1, n)
            if lo_i >= n:
                break
            if hi_i - lo_i < 2:
                e = lo_i
            else:
                e = lo_i + int(np.argmax(x[lo_i:hi_i]))
            if epochs and e <= epochs[-1]:
                e = epochs[-1] + max(1, int(round(0.8 * period)))
            if e >= n:
                break
            epochs.append(e)
            flags.append(True)
            prev_voiced = True
            t = e + period
        else:
            e = int(round(t))
            if epochs and e <= epochs[-1]:
                e = epochs[-1] + 1
            if e >= n:
                break
            epochs.append(e)
            flags.append(False)
            prev_voiced = False
            t = e + hop

    return PitchMarks(epochs=np.asarray(epochs, dtype=np.int64),
                      voiced=np.asarray(flags, dtype=bool))
