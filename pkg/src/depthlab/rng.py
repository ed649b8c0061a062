"""Reproducible random streams.

Every stochastic routine in the package takes an explicit RngStream. A stream
is a (seed, stream_id) pair mapped to a PCG64 generator through numpy's
SeedSequence, which guarantees the same byte sequence on every platform and
worker count. Parallel work derives disjoint child streams up front so that
results never depend on scheduling order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Children are spaced by a large prime so independently derived stream ids do
# not collide for realistic fan-outs (ids live in [0, 2^63)).
_CHILD_STRIDE = 1_000_003
_ID_SPACE = 2**63


@dataclass(frozen=True)
class RngStream:
    """A named position in the global reproducible stream space."""

    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        if not (0 <= self.seed < 2**64):
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not (0 <= self.stream < _ID_SPACE):
            raise ValueError(f"stream id out of range: {self.stream}")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, index: int) -> "RngStream":
        """Derive the index-th child stream (deterministic, collision-spaced)."""
        if index < 0:
            raise ValueError("child index must be nonnegative")
        new_id = (self.stream * _CHILD_STRIDE + index + 1) % _ID_SPACE
        return RngStream(self.seed, new_id)

    def children(self, count: int) -> list["RngStream"]:
        return [self.child(i) for i in range(count)]
