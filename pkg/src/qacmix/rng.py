"""Deterministic random numbers pinned to explicit, portable algorithms.

Python floats are IEEE-754 doubles on every supported platform, so fixing the
generator (xoshiro256++ seeded through splitmix64) and the samplers (53-bit
uniforms, Marsaglia polar normals, Marsaglia-Tsang gammas, gamma-ratio betas)
makes a seed reproduce the same stream everywhere. Library defaults are
avoided on purpose: the exact algorithms below are part of the contract, so
results stay bit-identical across runs, machines, and reimplementations.
"""

from __future__ import annotations

import math

MASK64 = (1 << 64) - 1

_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_SPLITMIX_MUL1 = 0xBF58476D1CE4E5B9
_SPLITMIX_MUL2 = 0x94D049BB133111EB


def _splitmix64(x: int) -> tuple[int, int]:
    """One splitmix64 step: returns (new_state, output)."""
    x = (x + _SPLITMIX_GAMMA) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * _SPLITMIX_MUL1) & MASK64
    z = ((z ^ (z >> 27)) * _SPLITMIX_MUL2) & MASK64
    return x, z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Child seed number `index` of `seed`, via successive splitmix64 outputs.

    Used to give sub-components (per-position bandits, episode samplers) their
    own decorrelated streams from one experiment seed.
    """
    if index < 0:
        raise ValueError("index must be >= 0")
    x = seed & MASK64
    out = 0
    for _ in range(index + 1):
        x, out = _splitmix64(x)
    return out


class Xoshiro256:
    """xoshiro256++ generator with splitmix64 seed expansion.

    Sampling methods consume the stream in a documented, fixed order; any two
    instances with equal state produce equal outputs forever.
    """

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        x = seed & MASK64
        words = []
        for _ in range(4):
            x, out = _splitmix64(x)
            words.append(out)
        if not any(words):  # the all-zero state is a fixed point of xoshiro
            words[0] = 1
        self.s0, self.s1, self.s2, self.s3 = words

    def getstate(self) -> tuple[int, int, int, int]:
        return (self.s0, self.s1, self.s2, self.s3)

    def setstate(self, state: tuple[int, int, int, int]) -> None:
        s0, s1, s2, s3 = (int(w) & MASK64 for w in state)
        if not (s0 or s1 or s2 or s3):
            raise ValueError("all-zero state is invalid for xoshiro256++")
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3

    def next_uint64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        x = (s0 + s3) & MASK64
        result = (((x << 23) & MASK64 | (x >> 41)) + s0) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) & MASK64) | (s3 >> 19)
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_uint64() >> 11) * 2.0**-53

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via top-bits rejection."""
        if n <= 0:
            raise ValueError("randrange() bound must be positive")
        if n == 1:
            return 0
        k = (n - 1).bit_length()
        shift = 64 - k
        while True:
            r = self.next_uint64() >> shift
            if r < n:
                return r

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def normal(self) -> float:
        """Standard normal via the Marsaglia polar method.

        The pair's second value is discarded so the stream consumption per
        call is self-contained (no hidden cache in the state).
        """
        while True:
            u = 2.0 * self.random() - 1.0
            v = 2.0 * self.random() - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                return u * math.sqrt(-2.0 * math.log(s) / s)

    def gamma(self, shape: float) -> float:
        """Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape < 1 boosted."""
        if shape <= 0.0:
            raise ValueError("gamma() shape must be positive")
        if shape < 1.0:
            # Boost: X ~ Gamma(a+1), U^(1/a) scaling gives Gamma(a).
            x = self.gamma(shape + 1.0)
            u = self.random()
            while u <= 0.0:  # 2^-53 corner: avoid 0**(1/a) underflow to 0
                u = self.random()
            return x * u ** (1.0 / shape)
        d = shape - 1.0 / 3.0
        c = 1.0 / math.sqrt(9.0 * d)
        while True:
            x = self.normal()
            t = 1.0 + c * x
            if t <= 0.0:
                continue
            v = t * t * t
            u = self.random()
            x2 = x * x
            if u < 1.0 - 0.0331 * x2 * x2:
                return d * v
            if u > 0.0 and math.log(u) < 0.5 * x2 + d * (1.0 - v + math.log(v)):
                return d * v

    def beta(self, alpha: float, beta: float) -> float:
        """Beta(alpha, beta) as the gamma ratio X / (X + Y)."""
        if alpha <= 0.0 or beta <= 0.0:
            raise ValueError("beta() parameters must be positive")
        while True:
            x = self.gamma(alpha)
            y = self.gamma(beta)
            total = x + y
            if total > 0.0:
                return x / total
