"""Acoustic front-end: log-mel filterbank features and SpecAugment masking."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dsp import AudioBuffer
from .errors import InsufficientFramesError

LOG_FLOOR = 1e-10
DEFAULT_CHANNELS = 80
DEFAULT_WINDOW_S = 0.025
DEFAULT_HOP_S = 0.010


@dataclass(frozen=True)
class FeatureMatrix:
    """frames x channels matrix of log-power mel energies."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"expected 2-D feature matrix, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("feature matrix contains NaN or Inf")
        object.__setattr__(self, "values", v)

    @property
    def frames(self) -> int:
        return self.values.shape[0]

    @property
    def channels(self) -> int:
        return self.values.shape[1]


def _hz_to_mel(hz):
    return 2595.0 * np.log10(1.0 + np.asarray(hz) / 700.0)


def _mel_to_hz(mel):
    return 700.0 * (10.0 ** (np.asarray(mel) / 2595.0) - 1.0)


def _mel_filterbank(channels: int, n_bins: int, sample_rate: int) -> np.ndarray:
    nyquist = sample_rate / 2.0
    mel_points = np.linspace(0.0, _hz_to_mel(nyquist), channels + 2)
    hz_points = _mel_to_hz(mel_points)
    bin_freqs = np.linspace(0.0, nyquist, n_bins)
    fb = np.zeros((channels, n_bins))
    for ch in range(channels):
        lo, mid, hi = hz_points[ch : ch + 3]
        up = (bin_freqs - lo) / max(mid - lo, 1e-9)
        down = (hi - bin_freqs) / max(hi - mid, 1e-9)
        fb[ch] = np.clip(np.minimum(up, down), 0.0, None)
    return fb


def log_mel_spectrogram(
    audio: AudioBuffer,
    channels: int = DEFAULT_CHANNELS,
    window: float = DEFAULT_WINDOW_S,
    hop: float = DEFAULT_HOP_S,
) -> FeatureMatrix:
    """Log-power mel filterbank energies over sliding Hamming windows.

    Frame count is 1 + floor((len - window*sr) / (hop*sr)); mel filters
    span [0, Nyquist]; the log is floored at LOG_FLOOR on power.
    """
    sr = audio.sample_rate
    win = int(round(window * sr))
    hop_n = int(round(hop * sr))
    if len(audio) < win:
        raise InsufficientFramesError(
            f"audio shorter than one window ({len(audio)} < {win} samples)"
        )
    n_frames = 1 + (len(audio) - win) // hop_n
    idx = hop_n * np.arange(n_frames)[:, None] + np.arange(win)[None, :]
    frames = audio.samples[idx] * np.hamming(win)

    nfft = 1 << int(np.ceil(np.log2(win)))
    power = np.abs(np.fft.rfft(frames, nfft)) ** 2
    fb = _mel_filterbank(channels, power.shape[1], sr)
    mel = power @ fb.T
    return FeatureMatrix(np.log(np.maximum(mel, LOG_FLOOR)))


def spec_augment(
    features: FeatureMatrix,
    rng: np.random.Generator,
    max_freq_mask: int = 27,
    max_time_mask: int = 100,
    n_freq_masks: int = 1,
    n_time_masks: int = 1,
) -> FeatureMatrix:
    """Mask random frequency bands and time spans with the utterance mean.

    Mask widths are uniform on [0, max]; time widths are additionally
    capped at the frame count. Cells outside the masks are untouched.
    """
    vals = features.values.copy()
    if vals.size == 0:
        raise ValueError("cannot mask an empty feature matrix")
    fill = float(vals.mean())
    n_frames, n_channels = vals.shape
    for _ in range(n_freq_masks):
        width = int(rng.integers(0, min(max_freq_mask, n_channels) + 1))
        start = int(rng.integers(0, n_channels - width + 1))
        vals[:, start : start + width] = fill
    for _ in range(n_time_masks):
        width = int(rng.integers(0, min(max_time_mask, n_frames) + 1))
        start = int(rng.integers(0, n_frames - width + 1))
        vals[start : start + width, :] = fill
    return FeatureMatrix(vals)


def feature_matrix_to_tsv(features: FeatureMatrix) -> str:
    """One frame per row, tab-separated, for inspection/export."""
    lines = ["\t".join(f"{v:.6f}" for v in row) for row in features.values]
    return "\n".join(lines) + "\n"
