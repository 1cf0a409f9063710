"""Threshold channel assignment over random fading gains.

Users are vertices ``0 .. n-1`` and channels ``n .. 2n-1`` of a bipartite
graph; user ``u`` may take channel ``c`` when the gain ``Z(u, c)`` exceeds
the threshold. A valid assignment is a matching covering every user.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .matching import maximum_matching
from .prob_model import ProbabilityAssignment
from .rng import RngStream, as_generator
from .sampler import SampledGraph
from .stats import proportion


@dataclass(frozen=True)
class Exponential:
    rate: float = 1.0

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"rate must be positive, got {self.rate}")

    def survival(self, lam: float) -> float:
        return math.exp(-self.rate * lam)

    def sample(self, gen: np.random.Generator, size) -> np.ndarray:
        return gen.exponential(1.0 / self.rate, size=size)

    def to_json(self) -> dict:
        return {"kind": "exponential", "rate": self.rate}


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def __post_init__(self):
        if not (0 <= self.lo < self.hi):
            raise ValueError(f"need 0 <= lo < hi, got lo={self.lo}, hi={self.hi}")

    def survival(self, lam: float) -> float:
        return min(1.0, max(0.0, (self.hi - lam) / (self.hi - self.lo)))

    def sample(self, gen: np.random.Generator, size) -> np.ndarray:
        return gen.uniform(self.lo, self.hi, size=size)

    def to_json(self) -> dict:
        return {"kind": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class PerPairTable:
    """A separate descriptor for every (user, channel) pair."""

    table: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.table)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("per-pair table must be square")
        for r in rows:
            for d in r:
                if isinstance(d, PerPairTable) or not hasattr(d, "survival"):
                    raise ValueError(f"invalid per-pair descriptor {d!r}")
        object.__setattr__(self, "table", rows)

    def to_json(self) -> dict:
        return {"kind": "table", "table": [[d.to_json() for d in r] for r in self.table]}


FadingModel = Union[Exponential, Uniform, PerPairTable]


def fading_from_json(obj) -> FadingModel:
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj.get("kind")
    if kind == "exponential":
        return Exponential(float(obj.get("rate", 1.0)))
    if kind == "uniform":
        return Uniform(float(obj["lo"]), float(obj["hi"]))
    if kind == "table":
        return PerPairTable(tuple(tuple(fading_from_json(d) for d in r) for r in obj["table"]))
    raise ValueError(f"unknown fading kind {kind!r}")


def _descriptor_grid(fading: FadingModel, n: int) -> Optional[list]:
    if isinstance(fading, PerPairTable):
        if len(fading.table) != n:
            raise ValueError(f"table is {len(fading.table)}x{len(fading.table)}, scenario has n={n}")
        return [list(r) for r in fading.table]
    return None


def survival_matrix(fading: FadingModel, lam: float, n: int) -> np.ndarray:
    """``P(Z(u, c) > lam)`` for every user ``u`` and channel ``c``."""
    if lam < 0:
        raise ValueError(f"threshold must be non-negative, got {lam}")
    grid = _descriptor_grid(fading, n)
    if grid is None:
        return np.full((n, n), fading.survival(lam))
    return np.array([[d.survival(lam) for d in row] for row in grid])


def gains_to_probabilities(fading: FadingModel, lam: float, n: int) -> ProbabilityAssignment:
    """Assignment on ``2n`` vertices: survival probabilities across the sides, zero within."""
    s = survival_matrix(fading, lam, n)
    probs = np.zeros((2 * n, 2 * n))
    probs[:n, n:] = s
    probs[n:, :n] = s.T
    return ProbabilityAssignment(probs)


def user_channel_split(n: int) -> tuple:
    return tuple(range(n)), tuple(range(n, 2 * n))


def sample_gains(fading: FadingModel, n: int, rng) -> np.ndarray:
    """``n x n`` gain matrix, drawn in row-major (user, channel) order."""
    gen = as_generator(rng)
    grid = _descriptor_grid(fading, n)
    if grid is None:
        return fading.sample(gen, (n, n))
    return np.array([[float(d.sample(gen, None)) for d in row] for row in grid])


def threshold_graph(gains: np.ndarray, lam: float) -> SampledGraph:
    n = gains.shape[0]
    us, cs = np.nonzero(gains > lam)
    return SampledGraph._from_arrays(2 * n, us, cs + n, user_channel_split(n))


@dataclass(frozen=True)
class ChannelScenario:
    n: int
    fading: FadingModel
    lam: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        if self.lam < 0:
            raise ValueError(f"threshold must be non-negative, got {self.lam}")

    def to_json(self) -> dict:
        return {"n": self.n, "fading": self.fading.to_json(), "lambda": self.lam}

    @classmethod
    def from_json(cls, obj) -> "ChannelScenario":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["n"]), fading_from_json(obj["fading"]), float(obj["lambda"]))


@dataclass
class AssignmentResult:
    success: bool
    matched_count: int
    assignment: dict          # user -> channel index (0 .. n-1)
    min_matched_gain: float   # nan when nothing is matched

    def csv_row(self, trial: int) -> list:
        return [trial, int(self.success), self.matched_count, repr(self.min_matched_gain)]


def simulate_assignment(sc: ChannelScenario, rng) -> AssignmentResult:
    """Sample gains, keep pairs above the threshold, match users to channels.

    Success means every user got a channel. With as many channels as users
    that is the same as a perfect bipartite matching.
    """
    n = sc.n
    gains = sample_gains(sc.fading, n, rng)
    g = threshold_graph(gains, sc.lam)
    m = maximum_matching(g)
    assignment = {u: c - n for u, c in m.edges}
    used = [gains[u, c] for u, c in assignment.items()]
    return AssignmentResult(
        success=len(assignment) == n,
        matched_count=len(assignment),
        assignment=assignment,
        min_matched_gain=float(min(used)) if used else math.nan,
    )


def success_probability(sc: ChannelScenario, trials: int, master_seed: int) -> dict:
    """Fraction of trials assigning every user, with a Wilson 95% interval.

    Trial ``i`` uses ``RngStream(master_seed).child(i)``.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    base = RngStream(master_seed)
    wins = sum(simulate_assignment(sc, base.child(i)).success for i in range(trials))
    out = proportion(wins, trials)
    out["estimate"] = out["frequency"]
    return out
