"""Deterministic splittable random streams.

Built on numpy's counter-based Philox generator seeded through SeedSequence,
so identical seeds replay bit-identically and spawned child streams are
statistically independent of the parent and of each other.
"""

from __future__ import annotations

import numpy as np


class RngStream:
    """A stateful random stream that can be split into independent children.

    Splitting is deterministic: the n-th child of a stream with a given seed
    is always the same stream, regardless of how much the parent has been
    consumed.
    """

    def __init__(self, seed):
        if isinstance(seed, np.random.SeedSequence):
            self._ss = seed
        else:
            self._ss = np.random.SeedSequence(int(seed))
        self.gen = np.random.Generator(np.random.Philox(self._ss))

    @property
    def seed_entropy(self):
        return self._ss.entropy

    def split(self, n: int) -> list["RngStream"]:
        return [RngStream(ss) for ss in self._ss.spawn(n)]

    def __repr__(self):
        return f"RngStream(entropy={self._ss.entropy}, key={self._ss.spawn_key})"
