"""Band-limited sample-rate conversion (Kaiser-windowed sinc, polyphase)."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy import signal

# taps per polyphase branch; generous enough for >40 dB round-trip SNR
_TAPS_PER_PHASE = 32
_KAISER_BETA = 8.6


def sinc_resample(audio, target_rate: int):
    """Resample to ``target_rate``; same-rate calls return the input as is.

    Output length is round(len * target / source); the polyphase output is
    trimmed or zero-padded by at most one sample to meet it.
    """
    from .buffer import AudioBuffer

    target_rate = int(target_rate)
    if target_rate <= 0:
        raise ValueError(f"target_rate must be positive, got {target_rate}")
    src = audio.sample_rate
    if target_rate == src:
        return audio

    ratio = Fraction(target_rate, src)
    up, down = ratio.numerator, ratio.denominator
    max_rate = max(up, down)
    numtaps = 2 * _TAPS_PER_PHASE * max_rate + 1
    h = signal.firwin(numtaps, 1.0 / max_rate, window=("kaiser", _KAISER_BETA))
    # resample_poly scales the supplied filter by `up` itself
    y = signal.resample_poly(audio.samples, up, down, window=h)

    want = int(round(len(audio) * target_rate / src))
    if len(y) > want:
        y = y[:want]
    elif len(y) < want:
        y = np.pad(y, (0, want - len(y)))
    return AudioBuffer(y, target_rate)
