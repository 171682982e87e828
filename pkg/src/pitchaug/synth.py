"""Synthetic test signals with analytically known parameters.

These generators back the measurement-oracle tests and the demo scripts:
the true f0 of a pulse train and the resonance frequencies of a
filtered vowel are synthesis inputs, not estimates.
"""
from __future__ import annotations

import numpy as np
from scipy import signal

from .dsp import AudioBuffer


def sine(freq_hz: float, duration_s: float, sample_rate: int, amplitude: float = 0.5) -> AudioBuffer:
    t = np.arange(int(round(duration_s * sample_rate))) / sample_rate
    return AudioBuffer(amplitude * np.sin(2 * np.pi * freq_hz * t), sample_rate)


def silence(duration_s: float, sample_rate: int) -> AudioBuffer:
    return AudioBuffer(np.zeros(int(round(duration_s * sample_rate))), sample_rate)


def pulse_train(f0_hz: float, duration_s: float, sample_rate: int, amplitude: float = 0.9) -> AudioBuffer:
    """Unit impulses at (rounded) period spacing; average rate stays exact."""
    n = int(round(duration_s * sample_rate))
    x = np.zeros(n)
    period = sample_rate / f0_hz
    positions = np.round(np.arange(0, n, period)).astype(int)
    x[positions[positions < n]] = amplitude
    return AudioBuffer(x, sample_rate)


def resonator(x: np.ndarray, center_hz: float, bandwidth_hz: float, sample_rate: int) -> np.ndarray:
    """Two-pole resonator (unit gain at the center frequency)."""
    r = np.exp(-np.pi * bandwidth_hz / sample_rate)
    theta = 2 * np.pi * center_hz / sample_rate
    a = np.array([1.0, -2 * r * np.cos(theta), r * r])
    w = np.exp(1j * theta)
    gain = abs(np.polyval(a[::-1], 1 / w))
    return signal.lfilter([gain], a, x)


def synth_vowel(
    f0_hz: float,
    duration_s: float,
    sample_rate: int,
    formants: tuple[tuple[float, float], ...] = ((700.0, 100.0), (1200.0, 100.0)),
    amplitude: float = 0.9,
) -> AudioBuffer:
    """Pulse train through cascaded resonators; formant centers are exact."""
    x = pulse_train(f0_hz, duration_s, sample_rate, 1.0).samples.copy()
    for center, bandwidth in formants:
        x = resonator(x, center, bandwidth, sample_rate)
    peak = np.max(np.abs(x))
    if peak > 0:
        x = x * (amplitude / peak)
    return AudioBuffer(x, sample_rate)
