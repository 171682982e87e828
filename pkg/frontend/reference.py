#!/usr/bin/env python3
"""Reference oracle for the bindings parity battery.

Reproduces one per-sample augmentation draw through the pitchaug library
API (not the CLI), so the parity test compares two independent routes to
the same result. Configuration arrives as a single JSON argument.
"""

import json
import sys

import numpy as np

from pitchaug.pipeline import read_wav, sample_seed, write_wav
from pitchaug.policy import (
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


def main() -> int:
    spec = json.loads(sys.argv[1])
    audio = read_wav(spec["input"])

    if spec["gender"] == "auto":
        gender = infer_gender(audio)
    else:
        gender = GenderLabel(spec["gender"])

    policy = spec.get("policy", "random")
    if policy == "opposite":
        kind = OppositePolicy(spec.get("p_f2m", 0.30), spec.get("p_m2f", 0.70))
    else:
        kind = RandomPolicy(spec.get("p_r", 0.50))
    config = PolicyConfig(
        kind=kind,
        beta_to_female=spec.get("beta_f", 1.2),
        beta_to_male=spec.get("beta_m", 0.8),
        formant_shifting=not spec.get("no_formant_shift", False),
        gender_switching=not spec.get("no_gender_switch", False),
    )

    seed = sample_seed(spec["base_seed"], spec["epoch"], spec["sample_id"])
    rng = np.random.default_rng(seed)

    force = spec.get("force_target")
    if force is not None:
        target = gender if force == "same" else GenderLabel(force)
        median = sample_target_median(target, config.prior_for(target), rng)
        kind_ = (DecisionKind.WITHIN_GENDER if target is gender
                 else DecisionKind.CROSS_GENDER)
        decision = AugmentationDecision(kind_, target, median)
    else:
        decision = decide(gender, config, rng)

    out = apply_decision(audio, decision, config)
    write_wav(spec["output"], out, fmt="float32")

    if decision.kind is DecisionKind.NONE:
        print("decision=none")
    else:
        print(f"decision={decision.kind.value} target={decision.target.value} "
              f"target_median={decision.target_median_hz:.2f}Hz")
    return 0


if __name__ == "__main__":
    sys.exit(main())
