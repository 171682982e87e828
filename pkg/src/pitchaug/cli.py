"""Command-line surface: single-file augmentation, manifest streaming,
analysis, feature export, and WER/bin reporting.

Exit codes: 0 success, 1 runtime/validation error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from typing import Optional

import numpy as np

from .dsp import estimate_pitch_contour, mean_f0, median_f0
from .errors import ToolkitError, UnvoicedAudioError
from .features import feature_matrix_to_tsv, log_mel_spectrogram, spec_augment
from .pipeline import (
    augment_epoch_stream,
    load_audio,
    load_manifest,
    read_wav,
    resolve_genders,
    sample_seed,
    stream_decisions,
    tally_decisions,
    write_wav,
)
from .policy import (
    AugmentationDecision,
    DecisionKind,
    GenderLabel,
    OppositePolicy,
    PolicyConfig,
    RandomPolicy,
    apply_decision,
    decide,
    infer_gender,
    sample_target_median,
)
from .scoring import (
    SegmentScore,
    binned_werr_report,
    bootstrap_significance,
    corpus_wer,
    score_segment,
    werr,
)

SEED_ENV_VAR = "PITCHAUG_SEED"


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV_VAR, "0"))


def _add_policy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--policy", choices=["opposite", "random"], default="random")
    # defaults follow the best validated configurations
    p.add_argument("--p-f2m", type=float, default=0.30, help="opposite: P(female -> male)")
    p.add_argument("--p-m2f", type=float, default=0.70, help="opposite: P(male -> female)")
    p.add_argument("--p-r", type=float, default=0.50, help="random: augmentation probability")
    p.add_argument("--beta-f", type=float, default=1.2, help="formant scale toward female")
    p.add_argument("--beta-m", type=float, default=0.8, help="formant scale toward male")
    p.add_argument("--no-formant-shift", action="store_true",
                   help="ablation: skip the formant step on cross-gender samples")
    p.add_argument("--no-gender-switch", action="store_true",
                   help="ablation: random policy targets only the source gender")


def _policy_config(args) -> PolicyConfig:
    if args.policy == "opposite":
        kind = OppositePolicy(p_f_to_m=args.p_f2m, p_m_to_f=args.p_m2f)
    else:
        kind = RandomPolicy(p_r=args.p_r)
    return PolicyConfig(
        kind=kind,
        beta_to_female=args.beta_f,
        beta_to_male=args.beta_m,
        formant_shifting=not args.no_formant_shift,
        gender_switching=not args.no_gender_switch,
    )


def _parse_gender(code: str) -> GenderLabel:
    return {"F": GenderLabel.FEMALE, "M": GenderLabel.MALE, "U": GenderLabel.UNKNOWN}[code]


def _describe(decision: AugmentationDecision) -> str:
    if decision.kind is DecisionKind.NONE:
        return "decision=none"
    return (f"decision={decision.kind.value} target={decision.target.value} "
            f"target_median={decision.target_median_hz:.2f}Hz")


def _cmd_augment(args) -> int:
    audio = read_wav(args.input)
    gender = _parse_gender(args.gender) if args.gender != "auto" else infer_gender(audio)
    config = _policy_config(args)
    base_seed = args.seed
    if args.sample_id is not None:
        seed = sample_seed(base_seed, args.epoch, args.sample_id)
    else:
        seed = base_seed
    rng = np.random.default_rng(seed)

    if args.force_target is not None:
        if args.force_target == "same":
            target = gender
        else:
            target = _parse_gender(args.force_target)
        median = sample_target_median(target, config.prior_for(target), rng)
        kind = DecisionKind.WITHIN_GENDER if target is gender else DecisionKind.CROSS_GENDER
        decision = AugmentationDecision(kind, target, median)
    else:
        decision = decide(gender, config, rng)

    skips: list[str] = []
    out = apply_decision(audio, decision, config, on_skip=skips.append)
    write_wav(args.output, out, fmt=args.format)
    print(f"gender={gender.value} seed={seed} {_describe(decision)}"
          + (" skipped=unvoiced" if skips else ""))
    return 0


def _cmd_augment_manifest(args) -> int:
    entries = load_manifest(args.manifest)
    config = _policy_config(args)
    if args.materialize:
        os.makedirs(args.output_dir, exist_ok=True)
        samples = []
        for sample in augment_epoch_stream(
            entries, config, args.epoch, args.seed,
            working_rate=args.working_rate, fail_fast=args.fail_fast,
        ):
            if sample.audio is not None:
                write_wav(os.path.join(args.output_dir, f"{sample.entry.id}.wav"),
                          sample.audio, fmt=args.format)
            samples.append(sample)
        stats = tally_decisions(samples)
    else:
        resolved = resolve_genders(entries, args.working_rate)
        stats = tally_decisions(stream_decisions(resolved, config, args.epoch, args.seed))

    f_frac, m_frac = stats.effective_fractions()
    print(f"entries={stats.total} none={stats.none} cross={stats.cross_gender} "
          f"within={stats.within_gender} skipped={stats.skipped} errors={stats.errors}")
    print(f"effective_female={f_frac:.4f} effective_male={m_frac:.4f}")
    return 0


def _cmd_analyze(args) -> int:
    audio = read_wav(args.input)
    contour = estimate_pitch_contour(audio)
    gender = infer_gender(audio)
    try:
        med = f"{median_f0(contour):.2f}"
    except UnvoicedAudioError:
        med = "unvoiced"
    print(f"median_f0={med} voiced_fraction={contour.voiced_fraction:.3f} "
          f"inferred_gender={gender.value}")
    return 0


def _cmd_features(args) -> int:
    audio = read_wav(args.input)
    feats = log_mel_spectrogram(audio, channels=args.channels)
    if args.specaugment:
        rng = np.random.default_rng(args.seed)
        feats = spec_augment(feats, rng, max_freq_mask=args.max_freq_mask,
                             max_time_mask=args.max_time_mask)
    tsv = feature_matrix_to_tsv(feats)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(tsv)
    else:
        sys.stdout.write(tsv)
    return 0


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def _read_meta(path: str) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter="\t")
        rows = list(reader)
    for required in ("id", "gender"):
        if rows and required not in rows[0]:
            raise ToolkitError(f"{path}: missing required column '{required}'")
    return rows


def _segment_mean_f0(row: dict) -> Optional[float]:
    if row.get("mean_f0"):
        return float(row["mean_f0"])
    path = row.get("audio_path")
    if path:
        try:
            return mean_f0(estimate_pitch_contour(read_wav(path)))
        except ToolkitError:
            return None
    return None


def _score_file(ref_lines, hyp_lines, meta, want_f0: bool) -> list[SegmentScore]:
    if not (len(ref_lines) == len(hyp_lines) == len(meta)):
        raise ToolkitError(
            f"line counts differ: ref={len(ref_lines)} hyp={len(hyp_lines)} meta={len(meta)}"
        )
    scores = []
    for ref, hyp, row in zip(ref_lines, hyp_lines, meta):
        f0 = _segment_mean_f0(row) if want_f0 else None
        scores.append(score_segment(row["id"], _parse_gender(row["gender"]), ref, hyp, f0))
    return scores


def _cmd_wer(args) -> int:
    refs = _read_lines(args.ref)
    meta = _read_meta(args.meta)
    system = _score_file(refs, _read_lines(args.hyp), meta, want_f0=False)
    baseline = None
    if args.baseline_hyp:
        baseline = _score_file(refs, _read_lines(args.baseline_hyp), meta, want_f0=False)

    rows = [("Overall", None), ("F", GenderLabel.FEMALE), ("M", GenderLabel.MALE)]
    header = "group\twer" + ("\twerr" if baseline else "")
    print(header)
    for name, group in rows:
        try:
            sys_wer = corpus_wer(system, group)
        except ToolkitError:
            continue
        line = f"{name}\t{sys_wer:.2f}"
        if baseline:
            base_wer = corpus_wer(baseline, group)
            # WERR is undefined against an error-free baseline group
            line += f"\t{werr(base_wer, sys_wer):.2f}" if base_wer > 0 else "\t-"
        print(line)
    if args.bootstrap:
        if not baseline:
            raise ToolkitError("--bootstrap requires --baseline-hyp")
        result = bootstrap_significance(
            baseline, system, n_resamples=args.n_resamples,
            confidence=args.confidence, seed=args.seed,
        )
        print(f"bootstrap_ci=[{result.ci_low:.4f}, {result.ci_high:.4f}] "
              f"significant={str(result.significant).lower()}")
    return 0


def _cmd_bins(args) -> int:
    refs = _read_lines(args.ref)
    meta = _read_meta(args.meta)
    baseline = _score_file(refs, _read_lines(args.baseline_hyp), meta, want_f0=True)
    system = _score_file(refs, _read_lines(args.hyp), meta, want_f0=True)
    reports, excluded = binned_werr_report(baseline, system, bin_width=args.bin_width)
    out = ["bin_low\tbin_high\tgender\twerr_percent\tword_count\tlow_confidence"]
    for r in reports:
        out.append(f"{r.bin_low:.0f}\t{r.bin_high:.0f}\t{r.gender.value}\t"
                   f"{r.werr_percent:.2f}\t{r.word_count}\t{str(r.low_confidence).lower()}")
    out.append(f"# excluded_unvoiced_words\t{excluded}")
    text = "\n".join(out) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_expected_dist(args) -> int:
    from .policy import expected_gender_distribution

    config = _policy_config(args)
    f, m = expected_gender_distribution(config, (args.base_f, 1.0 - args.base_f))
    print(f"female {f:.2f} male {m:.2f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pitchaug",
        description="f0/formant gender-rebalancing augmentation and fairness evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("augment", help="augment a single WAV file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--gender", choices=["F", "M", "auto"], default="auto")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--epoch", type=int, default=0)
    p.add_argument("--sample-id", default=None,
                   help="derive the seed as in epoch streaming from (seed, epoch, id)")
    p.add_argument("--force-target", choices=["F", "M", "same"], default=None)
    p.add_argument("--format", choices=["float32", "pcm16"], default="float32")
    _add_policy_flags(p)
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("augment-manifest", help="stream one epoch of a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--epoch", type=int, default=0)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--working-rate", type=int, default=16000)
    p.add_argument("--materialize", action="store_true",
                   help="write augmented audio (default: statistics only)")
    p.add_argument("--output-dir", default="augmented")
    p.add_argument("--format", choices=["float32", "pcm16"], default="float32")
    p.add_argument("--fail-fast", action="store_true")
    p.add_argument("--jobs", type=int, default=1,
                   help="accepted for interface parity; per-entry seeding makes results worker-count independent")
    _add_policy_flags(p)
    p.set_defaults(func=_cmd_augment_manifest)

    p = sub.add_parser("analyze", help="print f0 statistics and inferred gender")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("features", help="emit log-mel features as TSV")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.add_argument("--channels", type=int, default=80)
    p.add_argument("--specaugment", action="store_true")
    p.add_argument("--max-freq-mask", type=int, default=27)
    p.add_argument("--max-time-mask", type=int, default=100)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.set_defaults(func=_cmd_features)

    p = sub.add_parser("wer", help="overall and per-gender WER (and WERR vs a baseline)")
    p.add_argument("--ref", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--meta", required=True)
    p.add_argument("--baseline-hyp", default=None)
    p.add_argument("--bootstrap", action="store_true")
    p.add_argument("--n-resamples", type=int, default=1000)
    p.add_argument("--confidence", type=float, default=95.0)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.set_defaults(func=_cmd_wer)

    p = sub.add_parser("bins", help="f0-binned WERR report for two systems")
    p.add_argument("--ref", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--baseline-hyp", required=True)
    p.add_argument("--meta", required=True)
    p.add_argument("--bin-width", type=float, default=10.0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_bins)

    p = sub.add_parser("expected-dist", help="closed-form post-augmentation gender split")
    p.add_argument("--base-f", type=float, required=True,
                   help="base female fraction; male is 1 - base-f")
    _add_policy_flags(p)
    p.set_defaults(func=_cmd_expected_dist)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (ToolkitError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
