"""Mono audio buffer, the unit every DSP operation works on."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class AudioBuffer:
    """Mono waveform plus its sampling rate.

    Samples are float64 in [-1, 1]; out-of-range values are clipped at
    construction so overlap-add and filtering intermediates cannot leak
    out-of-range amplitudes. NaN/Inf is rejected.
    """

    samples: np.ndarray = field(repr=False)
    sample_rate: int

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=np.float64)
        if x.ndim != 1:
            raise ValueError(f"expected mono (1-D) samples, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("samples contain NaN or Inf")
        if int(self.sample_rate) <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        x = np.clip(x, -1.0, 1.0)
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        """Length in seconds."""
        return len(self.samples) / self.sample_rate

    def with_rate_label(self, sample_rate: int) -> "AudioBuffer":
        """Same samples, relabeled sampling rate (no resampling)."""
        return AudioBuffer(self.samples, sample_rate)
