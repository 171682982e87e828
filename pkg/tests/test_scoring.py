import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pitchaug.errors import EmptyReferenceError, ScoringError
from pitchaug.policy import GenderLabel
from pitchaug.scoring import (
    BootstrapResult,
    SegmentScore,
    WerBreakdown,
    binned_werr_report,
    bootstrap_significance,
    corpus_wer,
    normalize_tokens,
    score_segment,
    wer_align,
    werr,
)
from oracles import edit_distance

words = st.lists(st.sampled_from(["a", "b", "c"]), min_size=1, max_size=8)
hyps = st.lists(st.sampled_from(["a", "b", "c"]), max_size=8)


def seg(i, gender, errs, n_words, mean_f0=None):
    return SegmentScore(
        f"u{i}", gender, WerBreakdown(errs, 0, 0, n_words), mean_f0
    )


class TestNormalize:
    def test_lowercase_punctuation_whitespace(self):
        assert normalize_tokens("  Hello,   WORLD!  ") == ["hello", "world"]

    def test_unicode_punctuation(self):
        assert normalize_tokens("“quoted” text…") == ["quoted", "text"]

    def test_empty(self):
        assert normalize_tokens("  ") == []


class TestWerAlign:
    def test_exact_match(self):
        b = wer_align(["a", "b"], ["a", "b"])
        assert b.errors == 0 and b.wer == 0.0

    def test_known_alignment(self):
        b = wer_align("the cat sat".split(), "the cat sat down".split())
        assert (b.substitutions, b.deletions, b.insertions) == (0, 0, 1)

    def test_substitution_preferred(self):
        b = wer_align(["a", "b", "c"], ["a", "x", "c"])
        assert (b.substitutions, b.deletions, b.insertions) == (1, 0, 0)

    def test_empty_hypothesis_is_all_deletions(self):
        b = wer_align(["a", "b"], [])
        assert (b.substitutions, b.deletions, b.insertions) == (0, 2, 0)

    def test_empty_reference_raises(self):
        with pytest.raises(EmptyReferenceError):
            wer_align([], ["a"])

    @given(ref=words)
    @settings(max_examples=50)
    def test_self_alignment_zero(self, ref):
        assert wer_align(ref, ref).errors == 0

    @given(ref=words, hyp=hyps)
    @settings(max_examples=200)
    def test_matches_edit_distance_oracle(self, ref, hyp):
        assert wer_align(ref, hyp).errors == edit_distance(ref, hyp)


class TestCorpusWer:
    def test_pooled_not_averaged(self):
        scores = [seg(0, GenderLabel.FEMALE, 1, 10), seg(1, GenderLabel.MALE, 0, 90)]
        assert corpus_wer(scores) == pytest.approx(1.0)

    def test_group_filter(self):
        scores = [seg(0, GenderLabel.FEMALE, 1, 10), seg(1, GenderLabel.MALE, 9, 10)]
        assert corpus_wer(scores, GenderLabel.FEMALE) == pytest.approx(10.0)
        assert corpus_wer(scores, GenderLabel.MALE) == pytest.approx(90.0)

    def test_permutation_invariant(self):
        scores = [seg(i, GenderLabel.MALE, i % 3, 7 + i) for i in range(20)]
        shuffled = scores[:]
        random.Random(0).shuffle(shuffled)
        assert corpus_wer(scores) == corpus_wer(shuffled)

    def test_empty_group_raises(self):
        with pytest.raises(ScoringError):
            corpus_wer([seg(0, GenderLabel.MALE, 0, 5)], GenderLabel.FEMALE)


class TestWerr:
    def test_identity(self):
        assert werr(10.0, 10.0) == 0.0

    def test_reference_values(self):
        assert werr(10.10, 9.65) == pytest.approx(4.46, abs=0.01)
        assert werr(8.72, 8.10) == pytest.approx(7.11, abs=0.01)

    def test_degradation_is_negative(self):
        assert werr(10.0, 11.0) == pytest.approx(-10.0)

    def test_zero_baseline_raises(self):
        with pytest.raises(ScoringError):
            werr(0.0, 1.0)


class TestBootstrap:
    def make_paired(self, n, base_errs, sys_errs, n_words=20):
        base = [seg(i, GenderLabel.MALE, base_errs(i), n_words) for i in range(n)]
        sys = [seg(i, GenderLabel.MALE, sys_errs(i), n_words) for i in range(n)]
        return base, sys

    def test_identical_systems_not_significant(self):
        base, sys = self.make_paired(50, lambda i: i % 3, lambda i: i % 3)
        res = bootstrap_significance(base, sys, seed=1)
        assert isinstance(res, BootstrapResult)
        assert res.ci_low == res.ci_high == 0.0
        assert not res.significant

    def test_strictly_better_system_significant(self):
        base, sys = self.make_paired(100, lambda i: 4, lambda i: 1)
        res = bootstrap_significance(base, sys, seed=1)
        assert res.significant and res.ci_low > 0

    def test_deterministic_given_seed(self):
        base, sys = self.make_paired(60, lambda i: i % 5, lambda i: (i + 1) % 4)
        a = bootstrap_significance(base, sys, seed=7)
        b = bootstrap_significance(base, sys, seed=7)
        assert a == b

    def test_wider_confidence_nests(self):
        base, sys = self.make_paired(60, lambda i: i % 5, lambda i: (i + 1) % 4)
        inner = bootstrap_significance(base, sys, confidence=90.0, seed=7)
        outer = bootstrap_significance(base, sys, confidence=99.0, seed=7)
        assert outer.ci_low <= inner.ci_low and outer.ci_high >= inner.ci_high

    def test_mismatched_ids_raise(self):
        base = [seg(0, GenderLabel.MALE, 1, 10)]
        sys = [seg(1, GenderLabel.MALE, 1, 10)]
        with pytest.raises(ScoringError):
            bootstrap_significance(base, sys)


class TestBinnedReport:
    def make_corpus(self):
        base, sys = [], []
        spec = [
            # (mean_f0, gender, base_errs, sys_errs, words)
            (105.0, GenderLabel.MALE, 12, 9, 150),
            (108.0, GenderLabel.MALE, 8, 7, 140),
            (142.0, GenderLabel.MALE, 10, 8, 200),
            (236.0, GenderLabel.MALE, 3, 4, 30),   # sparse high-f0 male bin
            (221.0, GenderLabel.FEMALE, 9, 6, 180),
            (None, GenderLabel.FEMALE, 2, 2, 25),  # no f0 estimate
        ]
        for i, (f0, g, eb, es, w) in enumerate(spec):
            base.append(seg(i, g, eb, w, f0))
            sys.append(seg(i, g, es, w, f0))
        return base, sys

    def test_bin_keys_and_counts(self):
        base, sys = self.make_corpus()
        reports, excluded = binned_werr_report(base, sys)
        keys = {(r.bin_low, r.gender) for r in reports}
        assert keys == {
            (100.0, GenderLabel.MALE),
            (140.0, GenderLabel.MALE),
            (230.0, GenderLabel.MALE),
            (220.0, GenderLabel.FEMALE),
        }
        assert excluded == 25

    def test_word_count_conservation(self):
        base, sys = self.make_corpus()
        reports, excluded = binned_werr_report(base, sys)
        total = sum(r.word_count for r in reports) + excluded
        assert total == sum(s.breakdown.ref_words for s in base)

    def test_sparse_male_bin_flagged_low_confidence(self):
        base, sys = self.make_corpus()
        reports, _ = binned_werr_report(base, sys)
        by_key = {(r.bin_low, r.gender): r for r in reports}
        sparse = by_key[(230.0, GenderLabel.MALE)]
        assert sparse.low_confidence and sparse.word_count < 100
        assert sparse.werr_percent < 0  # degraded in this bin
        dense = by_key[(100.0, GenderLabel.MALE)]
        assert not dense.low_confidence

    def test_werr_matches_manual_pooling(self):
        base, sys = self.make_corpus()
        reports, _ = binned_werr_report(base, sys)
        by_key = {(r.bin_low, r.gender): r for r in reports}
        b = 100.0 * (12 + 8) / (150 + 140)
        s = 100.0 * (9 + 7) / (150 + 140)
        assert by_key[(100.0, GenderLabel.MALE)].werr_percent == pytest.approx(werr(b, s))


def test_score_segment_normalizes_text():
    s = score_segment("u0", GenderLabel.FEMALE, "The CAT sat.", "the cat sat")
    assert s.breakdown.errors == 0
    assert s.gender is GenderLabel.FEMALE
