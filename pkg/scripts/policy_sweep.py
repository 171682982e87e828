#!/usr/bin/env python3
"""Sweep policy hyperparameters and print the resulting gender balance.

Mirrors the dev-set sweeps used to pick the default configurations:
OPPOSITE over (p_f2m, p_m2f) pairs and RANDOM over p_r values, reporting
the closed-form post-augmentation distribution next to the empirical
fractions from a seeded decision stream.
"""

import argparse

from pitchaug.pipeline import ManifestEntry, stream_decisions, tally_decisions
from pitchaug.policy import (
    GenderLabel,
    OppositePolicy,
    PolicyConfig,
    RandomPolicy,
    expected_gender_distribution,
)

OPPOSITE_PAIRS = [(0.30, 0.70), (0.70, 0.30), (0.50, 0.50), (0.70, 0.70), (1.00, 1.00)]
RANDOM_RATES = [0.30, 0.40, 0.50, 0.60, 0.70, 0.80, 1.00]


def synthetic_manifest(n: int, female_fraction: float) -> list[ManifestEntry]:
    n_female = int(round(n * female_fraction))
    return [
        ManifestEntry(
            id=f"utt{i:06d}",
            audio_path=f"synthetic/{i}.wav",
            offset=0.0,
            duration=1.0,
            speaker_id=f"spk{i:06d}",
            gender=GenderLabel.FEMALE if i < n_female else GenderLabel.MALE,
            transcript="",
        )
        for i in range(n)
    ]


def sweep(entries, configs, labels, base, seed):
    print("config\texpected_f\texpected_m\tempirical_f\tempirical_m\tcross\twithin")
    for label, config in zip(labels, configs):
        ef, em = expected_gender_distribution(config, base)
        stats = tally_decisions(stream_decisions(entries, config, epoch=0, base_seed=seed))
        f, m = stats.effective_fractions()
        print(f"{label}\t{ef:.4f}\t{em:.4f}\t{f:.4f}\t{m:.4f}\t"
              f"{stats.cross_gender}\t{stats.within_gender}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--entries", type=int, default=20000)
    parser.add_argument("--female-fraction", type=float, default=0.30)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    entries = synthetic_manifest(args.entries, args.female_fraction)
    base = (args.female_fraction, 1.0 - args.female_fraction)

    print(f"# base distribution: F={base[0]:.2f} M={base[1]:.2f}, "
          f"{args.entries} entries, seed {args.seed}\n")
    print("## OPPOSITE")
    sweep(
        entries,
        [PolicyConfig(kind=OppositePolicy(fm, mf)) for fm, mf in OPPOSITE_PAIRS],
        [f"opposite({fm:.2f},{mf:.2f})" for fm, mf in OPPOSITE_PAIRS],
        base, args.seed,
    )
    print("\n## RANDOM")
    sweep(
        entries,
        [PolicyConfig(kind=RandomPolicy(r)) for r in RANDOM_RATES],
        [f"random({r:.2f})" for r in RANDOM_RATES],
        base, args.seed,
    )


if __name__ == "__main__":
    main()
