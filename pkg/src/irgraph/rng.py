"""Seed derivation and reproducible random streams.

Every random draw in the package goes through an :class:`RngStream`. A stream
is the pair ``(master_seed, stream_id)``; the numpy generator behind it is
``PCG64(SeedSequence([master_seed, stream_id]))``, which is stable across
platforms and numpy versions that keep the PCG64 bit stream.

Per-trial stream ids are derived with :func:`derive_seed`, a SplitMix64
chain over the integers it is given::

    h = mix64(master_seed)
    for x in parts:
        h = mix64(h ^ x)

Any implementation that reproduces ``mix64`` below reproduces the stream ids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1


def mix64(x: int) -> int:
    """SplitMix64 finalizer on a 64-bit unsigned integer."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(master_seed: int, *parts: int) -> int:
    h = mix64(master_seed & MASK64)
    for part in parts:
        h = mix64(h ^ (part & MASK64))
    return h


@dataclass(frozen=True)
class RngStream:
    master_seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        seq = np.random.SeedSequence([self.master_seed & MASK64, self.stream_id & MASK64])
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, *parts: int) -> "RngStream":
        return RngStream(self.master_seed, derive_seed(self.stream_id, *parts))


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a Generator or an integer seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    return RngStream(int(rng)).generator()
