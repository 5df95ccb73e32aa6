#!/usr/bin/env python3
"""Calibrate the independence threshold used by the acceptance suite.

Runs the dependence estimator on repeated draws of 10,000 independent
uniform [0, 1000] sample pairs and reports the 99th percentile of the
estimates. That percentile is frozen into tests/test_acceptance.py as
TAU_IND; an estimate below it is consistent with independence, and the
identity fixture must score above 10x it.

Seeds are pinned (BASE_SEED + repetition index) so the calibration is
reproducible:

    python3 scripts/mi_threshold_oracle.py
"""
from __future__ import annotations

import numpy as np

from trajscope.mi import HashMIState

BASE_SEED = 20260814
REPETITIONS = 100
SAMPLES = 10_000
LOW, HIGH = 0.0, 1000.0


def one_estimate(seed: int) -> float:
    rng = np.random.default_rng(seed)
    xs = rng.uniform(LOW, HIGH, SAMPLES)
    ys = rng.uniform(LOW, HIGH, SAMPLES)
    state = HashMIState()
    for x, y in zip(xs, ys):
        state.push(x, y)
    return state.estimate()


def main() -> None:
    estimates = []
    for i in range(REPETITIONS):
        value = one_estimate(BASE_SEED + i)
        estimates.append(value)
        if (i + 1) % 20 == 0:
            print(f"  {i + 1}/{REPETITIONS} done")
    arr = np.array(estimates)
    tau = float(np.percentile(arr, 99.0))
    print(f"repetitions      : {REPETITIONS}")
    print(f"samples per rep  : {SAMPLES}")
    print(f"base seed        : {BASE_SEED}")
    print(f"min / median / max: {arr.min():.9f} / {np.median(arr):.9f} / {arr.max():.9f}")
    print(f"TAU_IND (p99)    : {tau!r}")

    rng = np.random.default_rng(BASE_SEED)
    xs = rng.uniform(LOW, HIGH, SAMPLES)
    ident = HashMIState()
    for x in xs:
        ident.push(x, x)
    print(f"identity fixture  : {ident.estimate()!r}  (must exceed {10 * tau!r})")


if __name__ == "__main__":
    main()
