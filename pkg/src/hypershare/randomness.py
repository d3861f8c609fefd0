"""Seeded, splittable, counter-based random streams.

Every randomized operation in the package draws from a RandomTape. A tape
is identified by (seed, label); each draw hashes (seed, label, counter), so
streams are reproducible, independent of draw order elsewhere, and labeled
sub-streams never perturb their parent. Identical seeds give identical
streams across runs of this implementation.
"""

from __future__ import annotations

import hashlib


class RandomTape:
    """Deterministic random stream with labeled sub-streams."""

    __slots__ = ("seed", "label", "counter")

    def __init__(self, seed: int, label: str = ""):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.label = label
        self.counter = 0

    def __repr__(self):
        return f"RandomTape(seed={self.seed}, label={self.label!r}, counter={self.counter})"

    def split(self, label: str) -> "RandomTape":
        """Child stream; draws from it never affect this tape's counter."""
        child = f"{self.label}/{label}" if self.label else label
        return RandomTape(self.seed, child)

    def _block(self) -> int:
        h = hashlib.sha256(f"{self.seed}:{self.label}:{self.counter}".encode())
        self.counter += 1
        return int.from_bytes(h.digest(), "big")

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n), exact via rejection sampling."""
        if n <= 0:
            raise ValueError("randbelow requires n >= 1")
        # 256-bit blocks; rejection keeps the distribution exactly uniform
        limit = (1 << 256) - ((1 << 256) % n)
        while True:
            v = self._block()
            if v < limit:
                return v % n

    def randrange(self, start: int, stop: int) -> int:
        return start + self.randbelow(stop - start)

    def sample(self, population, k: int) -> list:
        """k distinct items, order-insensitive draw (partial Fisher-Yates)."""
        pool = list(population)
        if k > len(pool):
            raise ValueError("sample larger than population")
        for i in range(k):
            j = i + self.randbelow(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def choice(self, seq):
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.randbelow(len(seq))]
