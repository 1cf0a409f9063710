"""Binomial proportion summaries."""

from __future__ import annotations

import math

Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("need at least one trial")
    if not (0 <= successes <= trials):
        raise ValueError(f"successes={successes} outside 0..{trials}")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    centre = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    # the interval always contains phat; rounding must not break that
    return min(max(0.0, centre - half), phat), max(min(1.0, centre + half), phat)


def proportion(successes: int, trials: int) -> dict:
    lo, hi = wilson_interval(successes, trials)
    return {"successes": successes, "trials": trials, "frequency": successes / trials,
            "wilson95": [lo, hi]}
