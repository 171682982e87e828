"""Manifest ingestion and deterministic on-the-fly epoch streaming.

Augmented audio is never written to disk here: each epoch re-derives every
sample's decision from a stable 64-bit hash of (base_seed, epoch, entry id),
so results are reproducible under shuffling and worker sharding.
"""
from __future__ import annotations

import csv
import hashlib
import os
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from scipy.io import wavfile

from .dsp import AudioBuffer, sinc_resample
from .errors import AudioFormatError, GenderUnresolvedError, ManifestError, PipelineError
from .policy import (
    AugmentationDecision,
    DecisionKind,
    GenderLabel,
    PolicyConfig,
    apply_decision,
    decide,
    infer_gender,
)

MANIFEST_COLUMNS = ("id", "audio_path", "offset", "duration",
                    "speaker_id", "gender", "transcript")

_GENDER_CODES = {"F": GenderLabel.FEMALE, "M": GenderLabel.MALE, "U": GenderLabel.UNKNOWN}


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    audio_path: str
    offset: float
    duration: float
    speaker_id: str
    gender: GenderLabel
    transcript: str


@dataclass(frozen=True)
class AugmentedSample:
    entry: ManifestEntry
    audio: Optional[AudioBuffer]
    decision: AugmentationDecision
    effective_gender: GenderLabel
    epoch: int
    seed_used: int
    skipped: bool = False
    error: Optional[str] = None


def load_manifest(path: str) -> list[ManifestEntry]:
    """Parse a TSV manifest; audio paths resolve relative to the file."""
    base_dir = os.path.dirname(os.path.abspath(path))
    entries: list[ManifestEntry] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        try:
            header = next(reader)
        except StopIteration:
            raise ManifestError(f"{path}: empty manifest") from None
        for col in MANIFEST_COLUMNS:
            if col not in header:
                raise ManifestError(f"{path}: missing required column '{col}'")
        pos = {col: header.index(col) for col in MANIFEST_COLUMNS}
        for row_num, row in enumerate(reader, start=2):
            if not row or all(not cell for cell in row):
                continue
            if len(row) < len(header):
                raise ManifestError(f"{path}:{row_num}: expected {len(header)} fields, got {len(row)}")
            entry_id = row[pos["id"]]
            if entry_id in seen:
                raise ManifestError(
                    f"{path}:{row_num}: duplicate id '{entry_id}' (first at row {seen[entry_id]})"
                )
            seen[entry_id] = row_num
            try:
                offset = float(row[pos["offset"]])
                duration = float(row[pos["duration"]])
            except ValueError as exc:
                raise ManifestError(f"{path}:{row_num}: malformed numeric field: {exc}") from None
            if offset < 0 or duration <= 0:
                raise ManifestError(
                    f"{path}:{row_num}: need offset >= 0 and duration > 0, got {offset}, {duration}"
                )
            code = row[pos["gender"]].strip().upper()
            if code not in _GENDER_CODES:
                raise ManifestError(f"{path}:{row_num}: unknown gender code '{code}' (want F/M/U)")
            audio_path = row[pos["audio_path"]]
            if not os.path.isabs(audio_path):
                audio_path = os.path.join(base_dir, audio_path)
            entries.append(ManifestEntry(
                id=entry_id,
                audio_path=audio_path,
                offset=offset,
                duration=duration,
                speaker_id=row[pos["speaker_id"]],
                gender=_GENDER_CODES[code],
                transcript=row[pos["transcript"]],
            ))
    return entries


def read_wav(path: str) -> AudioBuffer:
    """Read a RIFF/WAV file (PCM-16/32 or float) into a mono buffer."""
    try:
        rate, data = wavfile.read(path)
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise AudioFormatError(f"{path}: cannot decode WAV: {exc}") from exc
    if data.dtype == np.int16:
        x = data / 32768.0
    elif data.dtype == np.int32:
        x = data / 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        x = data.astype(np.float64)
    else:
        raise AudioFormatError(f"{path}: unsupported sample format {data.dtype}")
    if x.ndim == 2:
        x = x.mean(axis=1)
    return AudioBuffer(x, int(rate))


def write_wav(path: str, audio: AudioBuffer, fmt: str = "float32") -> None:
    if fmt == "float32":
        wavfile.write(path, audio.sample_rate, audio.samples.astype(np.float32))
    elif fmt == "pcm16":
        pcm = np.clip(np.round(audio.samples * 32768.0), -32768, 32767).astype(np.int16)
        wavfile.write(path, audio.sample_rate, pcm)
    else:
        raise ValueError(f"unknown wav format '{fmt}'")


def load_audio(entry: ManifestEntry, working_rate: Optional[int] = None) -> AudioBuffer:
    """Read, mono-mix and slice one manifest segment."""
    buf = read_wav(entry.audio_path)
    start = int(round(entry.offset * buf.sample_rate))
    count = int(round(entry.duration * buf.sample_rate))
    if start + count > len(buf):
        raise AudioFormatError(
            f"{entry.audio_path}: slice [{entry.offset}, {entry.offset + entry.duration}) s "
            f"exceeds file extent ({buf.duration:.3f} s)"
        )
    sliced = AudioBuffer(buf.samples[start : start + count], buf.sample_rate)
    if working_rate is not None and working_rate != sliced.sample_rate:
        sliced = sinc_resample(sliced, working_rate)
    return sliced


def sample_seed(base_seed: int, epoch: int, entry_id: str) -> int:
    """Stable 64-bit per-sample seed; independent of manifest position."""
    key = f"{base_seed}\x1f{epoch}\x1f{entry_id}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


def resolve_genders(
    entries: Sequence[ManifestEntry], working_rate: Optional[int] = None
) -> list[ManifestEntry]:
    """Infer gender for UNKNOWN rows from their audio; fails if undecidable."""
    resolved = []
    for entry in entries:
        if entry.gender is GenderLabel.UNKNOWN:
            inferred = infer_gender(load_audio(entry, working_rate))
            if inferred is GenderLabel.UNKNOWN:
                raise GenderUnresolvedError(
                    f"entry '{entry.id}': gender unresolved (no voiced frames)"
                )
            entry = replace(entry, gender=inferred)
        resolved.append(entry)
    return resolved


def stream_decisions(
    entries: Sequence[ManifestEntry],
    config: PolicyConfig,
    epoch: int,
    base_seed: int,
) -> Iterator[AugmentedSample]:
    """Per-entry policy draws without touching audio files.

    Entries must have resolved genders. Yields samples with audio=None;
    effective_gender reflects the decision target for cross-gender draws.
    """
    for entry in entries:
        seed = sample_seed(base_seed, epoch, entry.id)
        rng = np.random.default_rng(seed)
        decision = decide(entry.gender, config, rng)
        effective = (decision.target
                     if decision.kind is DecisionKind.CROSS_GENDER
                     else entry.gender)
        yield AugmentedSample(
            entry=entry, audio=None, decision=decision,
            effective_gender=effective, epoch=epoch, seed_used=seed,
        )


def augment_epoch_stream(
    entries: Sequence[ManifestEntry],
    config: PolicyConfig,
    epoch: int,
    base_seed: int,
    working_rate: Optional[int] = 16000,
    fail_fast: bool = False,
) -> Iterator[AugmentedSample]:
    """One augmentation epoch: decisions plus manipulated audio.

    I/O or DSP failures surface per sample (error field set, audio None)
    unless fail_fast is on. Nothing is written to disk.
    """
    entries = resolve_genders(entries, working_rate)
    for sample in stream_decisions(entries, config, epoch, base_seed):
        skip_reasons: list[str] = []
        try:
            audio = load_audio(sample.entry, working_rate)
            out = apply_decision(audio, sample.decision, config, on_skip=skip_reasons.append)
        except Exception as exc:
            if fail_fast:
                raise PipelineError(f"entry '{sample.entry.id}': {exc}") from exc
            yield replace(sample, error=f"{sample.entry.id}: {exc}")
            continue
        skipped = bool(skip_reasons)
        effective = sample.entry.gender if skipped else sample.effective_gender
        yield replace(sample, audio=out, skipped=skipped, effective_gender=effective)


@dataclass
class EpochStats:
    """Decision tally for one epoch; skipped samples count only as skipped."""

    none: int = 0
    cross_gender: int = 0
    within_gender: int = 0
    skipped: int = 0
    errors: int = 0
    effective: dict = field(default_factory=lambda: {GenderLabel.FEMALE: 0, GenderLabel.MALE: 0})

    def add(self, sample: AugmentedSample) -> None:
        if sample.error is not None:
            self.errors += 1
            return
        if sample.skipped:
            self.skipped += 1
        elif sample.decision.kind is DecisionKind.NONE:
            self.none += 1
        elif sample.decision.kind is DecisionKind.CROSS_GENDER:
            self.cross_gender += 1
        else:
            self.within_gender += 1
        self.effective[sample.effective_gender] = self.effective.get(sample.effective_gender, 0) + 1

    @property
    def total(self) -> int:
        return self.none + self.cross_gender + self.within_gender + self.skipped + self.errors

    def effective_fractions(self) -> tuple[float, float]:
        counted = sum(self.effective.values())
        if counted == 0:
            return (0.0, 0.0)
        return (self.effective.get(GenderLabel.FEMALE, 0) / counted,
                self.effective.get(GenderLabel.MALE, 0) / counted)


def tally_decisions(samples: Iterable[AugmentedSample]) -> EpochStats:
    stats = EpochStats()
    for sample in samples:
        stats.add(sample)
    return stats
