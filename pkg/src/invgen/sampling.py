"""Seeded samplers for cycle-type class labels of uniform random elements.

The PRNG is SplitMix64: 64-bit counter state advanced by the golden-gamma
constant, outputs put through the murmur-style mix64 finalizer.  Stream
`t` of master seed `m` starts at state mix64(m + (t+1)*GOLDEN), so every
Monte Carlo trial owns an independent stream and results cannot depend on
scheduling.  Pure Python on purpose: constructing a stream costs about a
microsecond, which is what the trial budget allows.

Cycle lengths come from stick-breaking: draw L uniform on {1..remaining},
emit, repeat.  That realizes exactly the cycle-type law of a uniform
permutation of S_n; signs are independent fair coins per cycle.
"""

from __future__ import annotations

from .cycletypes import Partition, SignedCycleType
from .errors import ValidationError

M64 = (1 << 64) - 1
TWO64 = 1 << 64
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """SplitMix64 output finalizer; bijective on 64-bit words."""
    x &= M64
    x = ((x ^ (x >> 30)) * _MIX1) & M64
    x = ((x ^ (x >> 27)) * _MIX2) & M64
    return x ^ (x >> 31)


class RngState:
    """One SplitMix64 stream, identified by (master seed, stream index)."""

    __slots__ = ("state",)

    def __init__(self, seed: int, stream: int = 0):
        self.state = mix64((seed + (stream + 1) * GOLDEN) & M64)

    def next64(self) -> int:
        self.state = s = (self.state + GOLDEN) & M64
        return mix64(s)

    def randbelow(self, m: int) -> int:
        """Uniform on {0..m-1}; rejection keeps it exactly uniform."""
        lim = (TWO64 // m) * m
        while True:
            u = self.next64()
            if u < lim:
                return u % m


def _check_n(n) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")


def _sample_lengths(rng: RngState, n: int) -> list[int]:
    """Stick-breaking cycle lengths in emission order.  Hot path: the mix is
    inlined and the stream state lives in a local until the end."""
    s = rng.state
    out = []
    rem = n
    while rem:
        lim = (TWO64 // rem) * rem
        while True:
            s = (s + GOLDEN) & M64
            z = ((s ^ (s >> 30)) * _MIX1) & M64
            z = ((z ^ (z >> 27)) * _MIX2) & M64
            u = z ^ (z >> 31)
            if u < lim:
                break
        length = 1 + u % rem
        out.append(length)
        rem -= length
    rng.state = s
    return out


def _sample_lengths_signs(rng: RngState, n: int) -> tuple[list[int], list[int]]:
    """Stick-breaking lengths plus one fair sign per cycle, emission order."""
    s = rng.state
    lengths = []
    signs = []
    rem = n
    while rem:
        lim = (TWO64 // rem) * rem
        while True:
            s = (s + GOLDEN) & M64
            z = ((s ^ (s >> 30)) * _MIX1) & M64
            z = ((z ^ (z >> 27)) * _MIX2) & M64
            u = z ^ (z >> 31)
            if u < lim:
                break
        length = 1 + u % rem
        lengths.append(length)
        rem -= length
        s = (s + GOLDEN) & M64
        z = ((s ^ (s >> 30)) * _MIX1) & M64
        z = ((z ^ (z >> 27)) * _MIX2) & M64
        u = z ^ (z >> 31)
        signs.append(-1 if u >> 63 else 1)
    rng.state = s
    return lengths, signs


def sample_partition(n: int, rng: RngState) -> Partition:
    """Cycle type of a uniform random element of S_n."""
    _check_n(n)
    lengths = _sample_lengths(rng, n)
    lengths.sort(reverse=True)
    return Partition(n=n, parts=tuple(lengths))


def _canonical_signed(n: int, lengths: list[int], signs: list[int]) -> SignedCycleType:
    cycles = sorted(zip(lengths, signs), key=lambda c: (-c[0], -c[1]))
    return SignedCycleType(n=n, cycles=tuple(cycles))


def sample_signed(n: int, rng: RngState) -> SignedCycleType:
    """Class label of a uniform random element of C2 wr S_n."""
    _check_n(n)
    lengths, signs = _sample_lengths_signs(rng, n)
    return _canonical_signed(n, lengths, signs)


def sample_signed_conditioned(
    n: int, want_sign: int, rng: RngState, method: str = "flip"
) -> SignedCycleType:
    """Class label of a uniform element conditioned on total sign.

    The default flips the sign of the last-emitted cycle when the total
    comes out wrong; given the shape, that map is a bijection between the
    two sign sectors, so conditioning is exact at O(1) extra cost.  The
    rejection method resamples instead and is retained as a cross-check.
    """
    _check_n(n)
    if want_sign not in (1, -1):
        raise ValidationError(f"want_sign must be +1 or -1, got {want_sign!r}")
    if method == "flip":
        lengths, signs = _sample_lengths_signs(rng, n)
        minus = sum(1 for s in signs if s < 0)
        total = -1 if minus & 1 else 1
        if total != want_sign:
            signs[-1] = -signs[-1]
        return _canonical_signed(n, lengths, signs)
    if method == "reject":
        while True:
            lengths, signs = _sample_lengths_signs(rng, n)
            minus = sum(1 for s in signs if s < 0)
            if (-1 if minus & 1 else 1) == want_sign:
                return _canonical_signed(n, lengths, signs)
    raise ValidationError(f"unknown conditioning method {method!r}")
