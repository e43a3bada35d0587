"""Cycle types of plain and signed permutations, their achievable fixed-set
sizes, and the events evaluated per sampled tuple.

A conjugacy class of S_n is a partition of n; a class of the signed group
C2 wr S_n is a list of (length, sign) pairs.  An element fixes a k-subset
(up to conjugacy) iff some sub-multiset of its cycle lengths sums to k, and
for signed elements the subset carries the product of the chosen cycles'
signs.  Achievable sizes are kept as bitmasks so that intersecting across a
tuple of elements is a single AND.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import ValidationError


class WeylFamily(Enum):
    A = "A"
    B = "B"
    C = "C"
    D_PLUS = "D+"
    D_MINUS = "D-"

    @property
    def signed_labels(self) -> bool:
        """True when class labels carry per-cycle signs (all families but A)."""
        return self is not WeylFamily.A

    @property
    def signed_profiles(self) -> bool:
        """True when the J event matches (size, sign) pairs; family C matches
        plain sizes on the projection, so it is excluded here."""
        return self in (WeylFamily.B, WeylFamily.D_PLUS, WeylFamily.D_MINUS)

    @property
    def sector_sign(self) -> int | None:
        """Total-sign constraint on the family's class labels, if any."""
        if self is WeylFamily.D_PLUS:
            return 1
        if self is WeylFamily.D_MINUS:
            return -1
        return None

    @classmethod
    def parse(cls, token: str) -> "WeylFamily":
        try:
            return _FAMILY_TOKENS[token]
        except KeyError:
            raise ValidationError(
                f"unknown family {token!r}; expected one of A, B, C, D+, D-"
            ) from None


_FAMILY_TOKENS = {f.value: f for f in WeylFamily}


@dataclass(frozen=True)
class Partition:
    """Multiset of positive cycle lengths summing to n, stored non-increasing."""

    n: int
    parts: tuple[int, ...]


@dataclass(frozen=True)
class SignedCycleType:
    """Cycle lengths decorated with signs, in canonical order
    (length descending, + before - at equal length)."""

    n: int
    cycles: tuple[tuple[int, int], ...]

    @property
    def total_sign(self) -> int:
        minus = sum(1 for _, s in self.cycles if s < 0)
        return -1 if minus & 1 else 1


@dataclass(frozen=True)
class SizeProfile:
    """Bitmask over 1..n-1 of proper fixed-subset sizes achievable by one
    element; bit k is set iff some subset of cycles has total length k."""

    n: int
    achievable: int

    def sizes(self) -> list[int]:
        return [k for k in range(1, self.n) if self.achievable >> k & 1]


@dataclass(frozen=True)
class SignedSizeProfile:
    """Two bitmasks over 1..n-1: sizes achievable with subset-sign +1 (plus)
    and with subset-sign -1 (minus), plus the element's total sign."""

    n: int
    plus: int
    minus: int
    total_sign: int

    def pairs(self) -> list[tuple[int, int]]:
        out = [(k, 1) for k in range(1, self.n) if self.plus >> k & 1]
        out += [(k, -1) for k in range(1, self.n) if self.minus >> k & 1]
        return out


def make_partition(parts) -> Partition:
    """Canonicalize a list of positive cycle lengths into a Partition."""
    parts = list(parts)
    if not parts:
        raise ValidationError("partition needs at least one part")
    for p in parts:
        if not isinstance(p, int) or p < 1:
            raise ValidationError(f"parts must be positive integers, got {p!r}")
    parts.sort(reverse=True)
    return Partition(n=sum(parts), parts=tuple(parts))


def make_signed(cycles) -> SignedCycleType:
    """Canonicalize a list of (length, sign) pairs into a SignedCycleType."""
    cycles = list(cycles)
    if not cycles:
        raise ValidationError("signed cycle type needs at least one cycle")
    for length, sign in cycles:
        if not isinstance(length, int) or length < 1:
            raise ValidationError(f"cycle lengths must be positive integers, got {length!r}")
        if sign not in (1, -1):
            raise ValidationError(f"cycle signs must be +1 or -1, got {sign!r}")
    cycles.sort(key=lambda c: (-c[0], -c[1]))
    return SignedCycleType(n=sum(l for l, _ in cycles), cycles=tuple(cycles))


def project(s: SignedCycleType) -> Partition:
    """Forget the signs: the underlying partition of cycle lengths."""
    return Partition(n=s.n, parts=tuple(l for l, _ in s.cycles))


def subset_sum_mask(lengths, n: int) -> int:
    """Bitmask of proper subset sums of `lengths` (bits 1..n-1).

    Shift-or DP; ascending order keeps intermediate masks short, which
    matters at n around 10^6.
    """
    mask = 1
    for length in sorted(lengths):
        mask |= mask << length
    return mask & ((1 << n) - 2)


def signed_subset_masks(lengths, signs, n: int) -> tuple[int, int]:
    """(plus, minus) bitmasks of proper subset sums split by subset sign.

    Two-track DP: a positive cycle extends both tracks in place, a negative
    cycle swaps the contributions between tracks.
    """
    order = sorted(range(len(lengths)), key=lengths.__getitem__)
    plus, minus = 1, 0
    for i in order:
        length = lengths[i]
        if signs[i] > 0:
            plus |= plus << length
            minus |= minus << length
        else:
            plus, minus = plus | (minus << length), minus | (plus << length)
    proper = (1 << n) - 2
    return plus & proper, minus & proper


def fixed_sizes(p: Partition) -> SizeProfile:
    """Achievable proper fixed-subset sizes of one element of class p."""
    return SizeProfile(n=p.n, achievable=subset_sum_mask(p.parts, p.n))


def signed_fixed_sets(s: SignedCycleType) -> SignedSizeProfile:
    """Achievable proper (size, sign) pairs of one signed element."""
    lengths = [l for l, _ in s.cycles]
    signs = [sg for _, sg in s.cycles]
    plus, minus = signed_subset_masks(lengths, signs, s.n)
    return SignedSizeProfile(n=s.n, plus=plus, minus=minus, total_sign=s.total_sign)


def event_J(profiles, family: WeylFamily) -> bool:
    """True iff the sampled elements admit no common achievable proper
    fixed-set size (families A, C) or (size, sign) pair (families B, D)."""
    if not profiles:
        raise ValidationError("event_J needs at least one profile")
    n = profiles[0].n
    if any(p.n != n for p in profiles):
        raise ValidationError("profiles must share the same n")
    if family.signed_profiles:
        if not all(isinstance(p, SignedSizeProfile) for p in profiles):
            raise ValidationError(f"family {family.value} takes signed profiles")
        plus = minus = (1 << n) - 2
        for p in profiles:
            plus &= p.plus
            minus &= p.minus
        return plus == 0 and minus == 0
    if not all(isinstance(p, SizeProfile) for p in profiles):
        raise ValidationError(f"family {family.value} takes unsigned profiles")
    inter = (1 << n) - 2
    for p in profiles:
        inter &= p.achievable
    return inter == 0


def all_cycles_even(p: Partition) -> bool:
    return all(part % 2 == 0 for part in p.parts)


def all_cycles_positive(s: SignedCycleType) -> bool:
    return all(sign > 0 for _, sign in s.cycles)


def event_N(types) -> bool:
    """True iff all signed elements share the same total sign."""
    if not types:
        raise ValidationError("event_N needs at least one element")
    n = types[0].n
    if any(t.n != n for t in types):
        raise ValidationError("elements must share the same n")
    first = types[0].total_sign
    return all(t.total_sign == first for t in types)
