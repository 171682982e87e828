"""Piecewise-linear vocal tract length perturbation of magnitude spectra.

Used as the generic pitch-perturbation baseline: frequencies below the
boundary scale by the warp factor, then a linear segment joins
(boundary, factor*boundary) to (Nyquist, Nyquist) so the endpoints are
fixed. Warped magnitudes are interpolated back onto the original bins.
"""
from __future__ import annotations

import numpy as np

WARP_MIN = 0.9
WARP_MAX = 1.1
DEFAULT_BOUNDARY_HZ = 4800.0
_WARP_MEAN = 1.0
_WARP_STD = 0.1


def sample_warp_factor(rng: np.random.Generator) -> float:
    """Draw a warp factor from N(1, 0.1) clamped to [0.9, 1.1]."""
    return float(np.clip(rng.normal(_WARP_MEAN, _WARP_STD), WARP_MIN, WARP_MAX))


def vtlp_warp(
    spectrum_frame: np.ndarray,
    warp_factor: float,
    boundary_hz: float = DEFAULT_BOUNDARY_HZ,
    sample_rate: int = 16000,
) -> np.ndarray:
    """Warp one magnitude frame with a linear frequency axis over [0, Nyquist]."""
    nyquist = sample_rate / 2.0
    if boundary_hz >= nyquist:
        raise ValueError(f"boundary {boundary_hz} Hz must be below Nyquist {nyquist} Hz")
    if not (WARP_MIN <= warp_factor <= WARP_MAX):
        raise ValueError(f"warp factor {warp_factor} outside [{WARP_MIN}, {WARP_MAX}]")
    if warp_factor * boundary_hz >= nyquist:
        raise ValueError("warped boundary reaches Nyquist; lower the boundary")

    frame = np.asarray(spectrum_frame, dtype=np.float64)
    if frame.ndim != 1 or len(frame) < 2:
        raise ValueError("spectrum frame must be 1-D with at least two bins")

    freqs = np.linspace(0.0, nyquist, len(frame))
    knee = warp_factor * boundary_hz
    upper_slope = (nyquist - knee) / (nyquist - boundary_hz)
    warped = np.where(
        freqs <= boundary_hz,
        warp_factor * freqs,
        knee + (freqs - boundary_hz) * upper_slope,
    )
    # warped is monotone increasing, so interpolation inverts the map
    return np.interp(freqs, warped, frame)
