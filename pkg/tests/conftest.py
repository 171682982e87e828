import numpy as np
import pytest

from pitchaug.pipeline import write_wav
from pitchaug.synth import synth_vowel

SR = 16000


@pytest.fixture(scope="session")
def vowel140():
    return synth_vowel(140.0, 1.0, SR)


@pytest.fixture(scope="session")
def vowel240():
    return synth_vowel(240.0, 1.0, SR)


@pytest.fixture
def manifest_dir(tmp_path):
    """Small on-disk dataset: two talks, three segments, one UNKNOWN row."""
    audio = tmp_path / "audio"
    audio.mkdir()
    write_wav(str(audio / "m1.wav"), synth_vowel(120.0, 2.5, SR))
    write_wav(str(audio / "f1.wav"), synth_vowel(240.0, 1.5, SR))
    rows = [
        "id\taudio_path\toffset\tduration\tspeaker_id\tgender\ttranscript",
        "utt1\taudio/m1.wav\t0.0\t1.2\tspk1\tM\thello world",
        "utt2\taudio/m1.wav\t1.2\t1.3\tspk1\tM\tsecond segment",
        "utt3\taudio/f1.wav\t0.0\t1.5\tspk2\tU\tgood morning",
    ]
    (tmp_path / "manifest.tsv").write_text("\n".join(rows) + "\n")
    return tmp_path
