"""Gender-fairness evaluation: WER alignment, WERR, paired bootstrap and
f0-binned error reports.

Text is normalized before scoring: lowercase, Unicode punctuation
stripped, whitespace-tokenized. All statistics pool edit counts over
segments (sum of errors over sum of reference words), matching how the
per-gender and per-bin tables are built.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyReferenceError, ScoringError
from .policy import GenderLabel

LOW_CONFIDENCE_WORDS = 100


@dataclass(frozen=True)
class WerBreakdown:
    substitutions: int
    deletions: int
    insertions: int
    ref_words: int

    def __post_init__(self):
        if min(self.substitutions, self.deletions, self.insertions, self.ref_words) < 0:
            raise ValueError("edit counts must be non-negative")

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def wer(self) -> float:
        if self.ref_words == 0:
            raise EmptyReferenceError("WER undefined for empty reference")
        return self.errors / self.ref_words


@dataclass(frozen=True)
class SegmentScore:
    id: str
    gender: GenderLabel
    breakdown: WerBreakdown
    mean_f0: Optional[float] = None


@dataclass(frozen=True)
class BinReport:
    bin_low: float
    bin_high: float
    gender: GenderLabel
    werr_percent: float
    word_count: int
    low_confidence: bool


@dataclass(frozen=True)
class BootstrapResult:
    ci_low: float
    ci_high: float
    significant: bool


def normalize_tokens(text: str) -> list[str]:
    """Lowercase, drop Unicode punctuation, split on whitespace."""
    cleaned = "".join(
        " " if unicodedata.category(ch).startswith("P") else ch
        for ch in text.lower()
    )
    return cleaned.split()


def wer_align(reference: Sequence[str], hypothesis: Sequence[str]) -> WerBreakdown:
    """Minimal-edit alignment counts (unit costs).

    Ties during backtrace prefer substitution over insertion over deletion,
    so the reported split is deterministic.
    """
    ref = list(reference)
    hyp = list(hypothesis)
    if not ref:
        raise EmptyReferenceError("empty reference")
    n, m = len(ref), len(hyp)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        d[i][0] = i
    for j in range(1, m + 1):
        d[0][j] = j
    for i in range(1, n + 1):
        ri = ref[i - 1]
        row = d[i]
        prev = d[i - 1]
        for j in range(1, m + 1):
            diag = prev[j - 1] + (ri != hyp[j - 1])
            ins = row[j - 1] + 1
            dele = prev[j] + 1
            row[j] = diag if diag <= ins and diag <= dele else (ins if ins <= dele else dele)

    subs = dels = inss = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and d[i][j] == d[i - 1][j - 1] + (ref[i - 1] != hyp[j - 1]):
            if ref[i - 1] != hyp[j - 1]:
                subs += 1
            i -= 1
            j -= 1
        elif j > 0 and d[i][j] == d[i][j - 1] + 1:
            inss += 1
            j -= 1
        else:
            dels += 1
            i -= 1
    return WerBreakdown(subs, dels, inss, n)


def score_segment(
    segment_id: str,
    gender: GenderLabel,
    reference: str,
    hypothesis: str,
    mean_f0: Optional[float] = None,
) -> SegmentScore:
    breakdown = wer_align(normalize_tokens(reference), normalize_tokens(hypothesis))
    return SegmentScore(segment_id, gender, breakdown, mean_f0)


def corpus_wer(
    scores: Sequence[SegmentScore], group: Optional[GenderLabel] = None
) -> float:
    """Pooled WER percentage over the (optionally gender-filtered) segments."""
    selected = [s for s in scores if group is None or s.gender is group]
    if not selected:
        raise ScoringError(f"no segments in group {group}")
    errors = sum(s.breakdown.errors for s in selected)
    words = sum(s.breakdown.ref_words for s in selected)
    if words == 0:
        raise EmptyReferenceError("group has no reference words")
    return 100.0 * errors / words


def werr(baseline_wer: float, system_wer: float) -> float:
    """Relative WER reduction of the system versus the baseline, in percent."""
    if baseline_wer <= 0:
        raise ScoringError(f"baseline WER must be positive, got {baseline_wer}")
    return (baseline_wer - system_wer) / baseline_wer * 100.0


def _pair(baseline: Sequence[SegmentScore], system: Sequence[SegmentScore]):
    by_id = {s.id: s for s in system}
    if len(by_id) != len(system):
        raise ScoringError("duplicate segment ids in system scores")
    if set(by_id) != {s.id for s in baseline} or len(baseline) != len(system):
        raise ScoringError("baseline and system segment ids do not match")
    return [(b, by_id[b.id]) for b in baseline]


def bootstrap_significance(
    baseline: Sequence[SegmentScore],
    system: Sequence[SegmentScore],
    n_resamples: int = 1000,
    confidence: float = 95.0,
    seed: int = 0,
) -> BootstrapResult:
    """Paired bootstrap on the pooled WER difference (baseline - system).

    Segments are resampled with replacement, the same indices for both
    systems; the interval is the central percentile range and the
    difference is significant when the interval excludes zero.
    """
    pairs = _pair(baseline, system)
    err_b = np.array([b.breakdown.errors for b, _ in pairs], dtype=np.float64)
    err_s = np.array([s.breakdown.errors for _, s in pairs], dtype=np.float64)
    words = np.array([b.breakdown.ref_words for b, _ in pairs], dtype=np.float64)

    rng = np.random.default_rng(seed)
    n = len(pairs)
    idx = rng.integers(0, n, size=(n_resamples, n))
    w = words[idx].sum(axis=1)
    diff = 100.0 * (err_b[idx].sum(axis=1) - err_s[idx].sum(axis=1)) / w
    half = (100.0 - confidence) / 2.0
    lo, hi = np.percentile(diff, [half, 100.0 - half])
    return BootstrapResult(float(lo), float(hi), bool(lo > 0.0 or hi < 0.0))


def binned_werr_report(
    baseline: Sequence[SegmentScore],
    system: Sequence[SegmentScore],
    bin_width: float = 10.0,
    low_confidence_words: int = LOW_CONFIDENCE_WORDS,
) -> tuple[list[BinReport], int]:
    """Per-(f0 bin, gender) WERR and word counts.

    Segments without a mean f0 are excluded; the second return value is
    their total reference word count. Bins where the baseline has no
    errors report a WERR of 0 and are flagged low-confidence.
    """
    pairs = _pair(baseline, system)
    excluded_words = 0
    groups: dict[tuple[int, GenderLabel], list[tuple[SegmentScore, SegmentScore]]] = {}
    for b, s in pairs:
        if b.mean_f0 is None:
            excluded_words += b.breakdown.ref_words
            continue
        key = (int(np.floor(b.mean_f0 / bin_width)), b.gender)
        groups.setdefault(key, []).append((b, s))

    reports = []
    for (k, gender), members in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
        word_count = sum(b.breakdown.ref_words for b, _ in members)
        base_wer = corpus_wer([b for b, _ in members])
        sys_wer = corpus_wer([s for _, s in members])
        if base_wer > 0:
            rel = werr(base_wer, sys_wer)
            degenerate = False
        else:
            rel = 0.0
            degenerate = sys_wer > 0
        reports.append(BinReport(
            bin_low=k * bin_width,
            bin_high=(k + 1) * bin_width,
            gender=gender,
            werr_percent=rel,
            word_count=word_count,
            low_confidence=word_count < low_confidence_words or degenerate,
        ))
    return reports, excluded_words
