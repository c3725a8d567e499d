"""Seedable deterministic random source with a published draw contract.

The generator is SplitMix64: a 64-bit counter advanced by a fixed odd
constant, finalized by two xor-multiply rounds. It was chosen because it
is trivial to reproduce bit-exactly in any language with 64-bit integer
arithmetic, which keeps file outputs identical across reimplementations.

Draw contract
-------------
Every stochastic operation in this package documents how many uniform
draws it consumes and in what order. The primitive is ``uniform01``:

    u = (next_u64() >> 11) * 2**-53        # float64 in [0, 1)

All other draws are derived from ``uniform01`` with float64 arithmetic:

    sample_uniform(lo, hi) = lo + (hi - lo) * u        (1 draw)
    sample_beta11()        = sample_uniform(0, 1)      (1 draw)
    bernoulli(p)           = u < p                     (1 draw)
    rand_below(m)          = floor(u * m)              (1 draw)

Two streams with the same seed and the same call sequence produce
bit-identical outputs.
"""

import math

from .errors import ValidationError

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_DERIVE_SALT = 0xD1342543DE82EF95


class RngStream:
    """SplitMix64 stream. Single-owner: never share one stream across threads.

    Args:
        seed: any integer; reduced modulo 2**64.
    """

    __slots__ = ("seed", "_state")

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._state = self.seed

    def next_u64(self) -> int:
        """Advance the state and return the next 64-bit output."""
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform01(self) -> float:
        """One draw: float64 in [0, 1), 53 significant bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def derive(self, key: int) -> "RngStream":
        """Child stream for parallel work, keyed off the original seed.

        Derivation depends on the seed only, not on how many draws this
        stream has consumed, so child k is the same stream no matter when
        it is split off.
        """
        mixer = RngStream(((self.seed ^ _DERIVE_SALT) + key * _GAMMA) & _MASK64)
        return RngStream(mixer.next_u64())

    def __repr__(self):
        return f"RngStream(seed={self.seed})"


def sample_uniform(rng, lo: float, hi: float) -> float:
    """Uniform draw in [lo, hi). Consumes exactly one draw.

    A degenerate interval (lo == hi) returns lo and still consumes the
    draw, keeping call sequences aligned.

    Raises:
        ValidationError: if lo > hi.
    """
    if lo > hi:
        raise ValidationError(f"invalid range: lo={lo} > hi={hi}")
    return lo + (hi - lo) * rng.uniform01()


def sample_beta11(rng) -> float:
    """Beta(1, 1) draw, which is the uniform distribution on [0, 1).

    Implemented as exactly ``sample_uniform(rng, 0, 1)`` so the two are
    the same function on the same state.
    """
    return sample_uniform(rng, 0.0, 1.0)


def bernoulli(rng, p: float) -> bool:
    """True with probability p. Always consumes one draw.

    Raises:
        ValidationError: if p is outside [0, 1].
    """
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"invalid probability: {p}")
    return rng.uniform01() < p


def rand_below(rng, m: int) -> int:
    """Integer uniform on {0, ..., m-1}. Consumes one draw even for m == 1."""
    if m < 1:
        raise ValidationError(f"rand_below needs m >= 1, got {m}")
    return int(math.floor(rng.uniform01() * m))
