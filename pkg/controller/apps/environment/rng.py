"""
SplitMix64 - seeded generator behind generate_random_number.

Draws over [start, stop) reject values at or above the largest multiple
of the span below 2**64, so every outcome is equally likely.
"""

MASK_64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_1 = 0xBF58476D1CE4E5B9
MIX_2 = 0x94D049BB133111EB


class SplitMix64:

    def __init__(self, seed: int):
        self.seed = seed
        self.state = seed & MASK_64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK_64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX_1) & MASK_64
        z = ((z ^ (z >> 27)) * MIX_2) & MASK_64
        return z ^ (z >> 31)

    def randrange(self, start: int, stop: int) -> int:
        span = stop - start
        if span <= 0:
            raise ValueError(f"empty range [{start}, {stop})")
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            draw = self.next_u64()
            if draw < limit:
                return start + draw % span

    def __repr__(self) -> str:
        return f"SplitMix64(seed={self.seed})"
