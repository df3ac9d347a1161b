"""Reproducible random-number streams.

Every stochastic routine in this package consumes an :class:`RngStream`,
a (master_seed, stream_id) pair.  Distinct stream ids give statistically
independent streams by construction; the same pair always reproduces the
same path.

The generator is pinned: numpy's counter-based Philox bit generator,
keyed by ``SeedSequence(entropy=master_seed, spawn_key=(stream_id,))``.
This mapping is part of the package contract and must not change between
versions, otherwise archived experiment outputs stop being reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """Handle for one reproducible random stream."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not (0 <= int(self.master_seed) < 2**64):
            raise ValueError("master_seed must fit in 64 bits")
        if int(self.stream_id) < 0:
            raise ValueError("stream_id must be nonnegative")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        seq = np.random.SeedSequence(
            entropy=int(self.master_seed), spawn_key=(int(self.stream_id),)
        )
        return np.random.Generator(np.random.Philox(seq))

    def child(self, offset: int) -> "RngStream":
        """Stream with the same master seed and a shifted stream id."""
        return RngStream(self.master_seed, self.stream_id + offset)
