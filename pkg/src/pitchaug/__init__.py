"""Gender-rebalancing f0/formant augmentation and ASR fairness evaluation."""

__version__ = "0.1.0"

from .dsp import (
    AudioBuffer,
    PitchContour,
    PitchMarks,
    detect_pitch_marks,
    estimate_pitch_contour,
    mean_f0,
    median_f0,
    psola_resynthesize,
    shift_f0,
    shift_formants,
    sinc_resample,
    vtlp_warp,
)
from .features import FeatureMatrix, log_mel_spectrogram, spec_augment
from .pipeline import (
    AugmentedSample,
    ManifestEntry,
    augment_epoch_stream,
    load_audio,
    load_manifest,
    sample_seed,
    stream_decisions,
)
from .policy import (
    AugmentationDecision,
    DecisionKind,
    GenderF0Prior,
    GenderLabel,
    OppositePolicy,
    PolicyConfig,
    RandomPolicy,
    apply_decision,
    decide,
    expected_gender_distribution,
    infer_gender,
    sample_target_median,
)
from .scoring import (
    BinReport,
    BootstrapResult,
    SegmentScore,
    WerBreakdown,
    binned_werr_report,
    bootstrap_significance,
    corpus_wer,
    wer_align,
    werr,
)
