"""Reproducible random streams.

Built on numpy's Philox counter-based generator: distinct (seed, stream_id)
pairs key disjoint streams by construction, so parallel workers never
overlap and results do not depend on how work is scheduled.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_SEED = 0x5EED


@dataclass(frozen=True)
class RngStream:
    """A named, reproducible stream of randomness.

    The same (seed, stream_id) always yields the identical sample sequence.
    """

    seed: int = DEFAULT_SEED
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(ss))

    def child(self, index: int) -> np.random.Generator:
        """Generator for a disjoint substream (e.g. one Monte-Carlo chunk)."""
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, index))
        return np.random.Generator(np.random.Philox(ss))
