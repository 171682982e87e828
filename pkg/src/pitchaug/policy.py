"""Augmentation policies: per-sample decisions and target-pitch sampling.

Two schemes are supported. The opposite policy flips a sample toward the
other gender with a per-gender probability (p_f_to_m for female sources,
p_m_to_f for male ones); flipped samples get both an f0 shift and a
formant shift. The random policy augments a sample with probability p_r
and picks the target gender uniformly; same-gender targets shift only
the f0, cross-gender targets also shift formants.

All randomness flows through an explicitly passed numpy Generator. The
draw order per decision is fixed (augment? -> target? -> target median)
so identical seeds reproduce identical decision sequences.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np

from .dsp import AudioBuffer, estimate_pitch_contour, median_f0, shift_f0, shift_formants
from .errors import GenderUnresolvedError, InsufficientFramesError, UnvoicedAudioError


class GenderLabel(Enum):
    FEMALE = "F"
    MALE = "M"
    UNKNOWN = "U"


# median f0 at or above this infers a female speaker; roughly midway
# between the two gender priors, weighted toward their overlap region
GENDER_F0_THRESHOLD_HZ = 175.0


@dataclass(frozen=True)
class GenderF0Prior:
    """Normal prior over target median f0 for one gender."""

    mean_hz: float
    std_hz: float

    def __post_init__(self):
        if not self.mean_hz > 3 * self.std_hz:
            raise ValueError("prior mean must exceed 3 standard deviations")

    @property
    def low_hz(self) -> float:
        return self.mean_hz - 3 * self.std_hz

    @property
    def high_hz(self) -> float:
        return self.mean_hz + 3 * self.std_hz


FEMALE_PRIOR = GenderF0Prior(mean_hz=250.0, std_hz=17.0)
MALE_PRIOR = GenderF0Prior(mean_hz=140.0, std_hz=20.0)


@dataclass(frozen=True)
class OppositePolicy:
    p_f_to_m: float
    p_m_to_f: float

    def __post_init__(self):
        for name, p in (("p_f_to_m", self.p_f_to_m), ("p_m_to_f", self.p_m_to_f)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")


@dataclass(frozen=True)
class RandomPolicy:
    p_r: float

    def __post_init__(self):
        if not 0.0 <= self.p_r <= 1.0:
            raise ValueError(f"p_r must be in [0, 1], got {self.p_r}")


@dataclass(frozen=True)
class PolicyConfig:
    kind: Union[OppositePolicy, RandomPolicy]
    female_prior: GenderF0Prior = FEMALE_PRIOR
    male_prior: GenderF0Prior = MALE_PRIOR
    beta_to_female: float = 1.2
    beta_to_male: float = 0.8
    # ablation switches: formant_shifting=False drops the beta step on
    # cross-gender samples; gender_switching=False restricts random-policy
    # targets to the source gender
    formant_shifting: bool = True
    gender_switching: bool = True

    def __post_init__(self):
        for name, b in (("beta_to_female", self.beta_to_female),
                        ("beta_to_male", self.beta_to_male)):
            if not 0.5 <= b <= 2.0:
                raise ValueError(f"{name} must be in [0.5, 2], got {b}")

    def prior_for(self, gender: GenderLabel) -> GenderF0Prior:
        if gender is GenderLabel.FEMALE:
            return self.female_prior
        if gender is GenderLabel.MALE:
            return self.male_prior
        raise GenderUnresolvedError("no f0 prior for UNKNOWN gender")

    def beta_for(self, gender: GenderLabel) -> float:
        return self.beta_to_female if gender is GenderLabel.FEMALE else self.beta_to_male


class DecisionKind(Enum):
    NONE = "none"
    CROSS_GENDER = "cross_gender"
    WITHIN_GENDER = "within_gender"


@dataclass(frozen=True)
class AugmentationDecision:
    kind: DecisionKind
    target: Optional[GenderLabel] = None
    target_median_hz: Optional[float] = None

    @classmethod
    def none(cls) -> "AugmentationDecision":
        return cls(DecisionKind.NONE)


def _other(gender: GenderLabel) -> GenderLabel:
    return GenderLabel.MALE if gender is GenderLabel.FEMALE else GenderLabel.FEMALE


def sample_target_median(
    target: GenderLabel, prior: GenderF0Prior, rng: np.random.Generator
) -> float:
    """Draw a target median f0 from the prior, clamped to +/-3 sigma."""
    if target is GenderLabel.UNKNOWN:
        raise GenderUnresolvedError("cannot sample a target median for UNKNOWN gender")
    draw = rng.normal(prior.mean_hz, prior.std_hz)
    return float(np.clip(draw, prior.low_hz, prior.high_hz))


def decide(
    source_gender: GenderLabel, config: PolicyConfig, rng: np.random.Generator
) -> AugmentationDecision:
    """One per-sample policy draw."""
    if source_gender is GenderLabel.UNKNOWN:
        raise GenderUnresolvedError("gender unresolved: infer or label before deciding")

    kind = config.kind
    if isinstance(kind, OppositePolicy):
        p = kind.p_f_to_m if source_gender is GenderLabel.FEMALE else kind.p_m_to_f
        if rng.random() >= p:
            return AugmentationDecision.none()
        target = _other(source_gender)
        median = sample_target_median(target, config.prior_for(target), rng)
        return AugmentationDecision(DecisionKind.CROSS_GENDER, target, median)

    if rng.random() >= kind.p_r:
        return AugmentationDecision.none()
    if config.gender_switching:
        target = GenderLabel.FEMALE if rng.random() < 0.5 else GenderLabel.MALE
    else:
        target = source_gender
    median = sample_target_median(target, config.prior_for(target), rng)
    if target is source_gender:
        return AugmentationDecision(DecisionKind.WITHIN_GENDER, target, median)
    return AugmentationDecision(DecisionKind.CROSS_GENDER, target, median)


def apply_decision(
    audio: AudioBuffer,
    decision: AugmentationDecision,
    config: PolicyConfig,
    on_skip: Optional[Callable[[str], None]] = None,
) -> AudioBuffer:
    """Run the DSP chain a decision calls for.

    NONE is a bit-exact pass-through. Unvoiced audio under a non-NONE
    decision passes through unmodified; ``on_skip`` (if given) is called
    with the reason so callers can account for skips.
    """
    if decision.kind is DecisionKind.NONE:
        return audio
    try:
        out = shift_f0(audio, decision.target_median_hz)
    except UnvoicedAudioError:
        if on_skip is not None:
            on_skip("unvoiced")
        return audio
    if decision.kind is DecisionKind.CROSS_GENDER and config.formant_shifting:
        out = shift_formants(out, config.beta_for(decision.target))
    return out


def infer_gender(audio: AudioBuffer) -> GenderLabel:
    """Classify by median f0 against the 175 Hz threshold; silence is UNKNOWN."""
    try:
        med = median_f0(estimate_pitch_contour(audio))
    except (UnvoicedAudioError, InsufficientFramesError):
        return GenderLabel.UNKNOWN
    return GenderLabel.FEMALE if med >= GENDER_F0_THRESHOLD_HZ else GenderLabel.MALE


def expected_gender_distribution(
    config: PolicyConfig, base: tuple[float, float]
) -> tuple[float, float]:
    """Closed-form post-augmentation gender fractions for a base (f, m) split."""
    f, m = base
    if not np.isclose(f + m, 1.0):
        raise ValueError(f"base fractions must sum to 1, got {f} + {m}")
    kind = config.kind
    if isinstance(kind, OppositePolicy):
        f_new = f * (1.0 - kind.p_f_to_m) + m * kind.p_m_to_f
    else:
        if not config.gender_switching:
            f_new = f
        else:
            f_new = f * (1.0 - kind.p_r / 2.0) + m * (kind.p_r / 2.0)
    return (f_new, 1.0 - f_new)
