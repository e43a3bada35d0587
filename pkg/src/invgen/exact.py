"""Exact small-n ground truth in rational arithmetic.

Enumerates conjugacy classes with their exact probabilities and computes
Prob(J^l) two independent ways: inclusion-exclusion over the lattice of
achievable (signed) sizes via a dense superset-sum zeta transform, and a
direct sum over all l-tuples of class profiles.  Everything is a Fraction;
no floating point enters this module.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm

from .cycletypes import (
    Partition,
    SignedCycleType,
    SizeProfile,
    WeylFamily,
    all_cycles_even,
    all_cycles_positive,
    event_J,
    fixed_sizes,
    project,
    signed_fixed_sets,
)
from .errors import CapacityError, ValidationError

# The zeta transform is dense over 2^(n-1) (unsigned) or 2^(2(n-1)) (signed)
# lattice points, so these caps keep the state space below ~2^24.  The top of
# the unsigned range still costs minutes and a few hundred MB; the oracle
# exists for testing, not production.
UNSIGNED_LIMIT = 24
SIGNED_LIMIT = 10


@dataclass(frozen=True)
class ClassTable:
    """All class labels of one family at size n with exact probabilities."""

    n: int
    family: WeylFamily
    entries: tuple[tuple[object, Fraction], ...]


def _check_capacity(n: int, family: WeylFamily) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    limit = SIGNED_LIMIT if family.signed_profiles else UNSIGNED_LIMIT
    if n > limit:
        raise CapacityError(
            f"exact mode for family {family.value} is limited to n <= {limit} (got {n})"
        )


def _partitions(n: int, maxpart: int | None = None):
    """All partitions of n as non-increasing tuples."""
    if maxpart is None:
        maxpart = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, maxpart), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def _partition_prob(parts: tuple[int, ...]) -> Fraction:
    """Probability that a uniform element of S_n has this cycle type:
    1 / prod_j j^{m_j} m_j!  (reciprocal of the centralizer order)."""
    den = 1
    for j, m in Counter(parts).items():
        den *= j**m * factorial(m)
    return Fraction(1, den)


def _signed_classes(n: int):
    """All signed cycle types of n with probabilities
    1 / prod_j (2j)^{m_j} m_j^+! m_j^-!  in canonical label order."""
    for parts in _partitions(n):
        counts = Counter(parts)
        js = sorted(counts, reverse=True)

        def rec(i: int, cycles: list, den: int):
            if i == len(js):
                yield SignedCycleType(n=n, cycles=tuple(cycles)), Fraction(1, den)
                return
            j = js[i]
            m = counts[j]
            for mp in range(m, -1, -1):
                ext = [(j, 1)] * mp + [(j, -1)] * (m - mp)
                yield from rec(
                    i + 1, cycles + ext, den * (2 * j) ** m * factorial(mp) * factorial(m - mp)
                )

        yield from rec(0, [], 1)


def enumerate_classes(n: int, family: WeylFamily) -> ClassTable:
    """Class labels and exact probabilities for one family at size n.

    D sectors are the total-sign-constrained halves of the signed table with
    probabilities doubled; each sector carrying exactly half the mass is a
    theorem (flip the sign of any one designated cycle), asserted here.
    """
    _check_capacity(n, family)
    if family is WeylFamily.A:
        entries = [
            (Partition(n=n, parts=parts), _partition_prob(parts)) for parts in _partitions(n)
        ]
    elif family.sector_sign is None:  # B and C share the signed table
        entries = list(_signed_classes(n))
    else:
        want = family.sector_sign
        kept = [(s, p) for s, p in _signed_classes(n) if s.total_sign == want]
        sector_mass = sum(p for _, p in kept)
        assert sector_mass == Fraction(1, 2), f"sector mass {sector_mass} != 1/2"
        entries = [(s, 2 * p) for s, p in kept]
    total = sum(p for _, p in entries)
    assert total == 1, f"class probabilities sum to {total}"
    return ClassTable(n=n, family=family, entries=tuple(entries))


def _combined_mask(profile) -> int:
    """Pack a profile into one lattice point: unsigned sizes use bits
    0..n-2; signed profiles put plus sizes there and minus sizes above."""
    if isinstance(profile, SizeProfile):
        return profile.achievable >> 1
    return (profile.plus >> 1) | ((profile.minus >> 1) << (profile.n - 1))


def _masses(n: int, family: WeylFamily) -> tuple[dict[int, Fraction], int]:
    """Aggregate class probabilities by distinct profile mask.
    Returns (mask -> probability, lattice bit count)."""
    if family.signed_profiles:
        table = enumerate_classes(n, family)
        univ = 2 * (n - 1)
        masses: dict[int, Fraction] = {}
        for label, p in table.entries:
            mask = _combined_mask(signed_fixed_sets(label))
            masses[mask] = masses.get(mask, Fraction(0)) + p
        return masses, univ
    # Families A and C: the J event only reads plain sizes, and the uniform
    # signed measure projects to the uniform S_n class measure, so both use
    # the partition table (this keeps C at the unsigned capacity).
    table = enumerate_classes(n, WeylFamily.A)
    masses = {}
    for label, p in table.entries:
        mask = _combined_mask(fixed_sizes(label))
        masses[mask] = masses.get(mask, Fraction(0)) + p
    return masses, n - 1


def _inclusion_exclusion(masses: dict[int, Fraction], univ: int, l: int) -> Fraction:
    """Prob(no common lattice point among l independent draws)
    = sum_K (-1)^|K| q_K^l with q_K = Prob(one profile covers K),
    computed by a dense superset-sum zeta transform in integer arithmetic."""
    den = 1
    for f in masses.values():
        den = lcm(den, f.denominator)
    size = 1 << univ
    acc = [0] * size
    for mask, f in masses.items():
        acc[mask] += f.numerator * (den // f.denominator)
    for b in range(univ):
        bit = 1 << b
        step = bit << 1
        for base in range(0, size, step):
            for k in range(base, base + bit):
                acc[k] += acc[k + bit]
    total = 0
    for k in range(size):
        v = acc[k]
        if v:
            total += -(v**l) if k.bit_count() & 1 else v**l
    return Fraction(total, den**l)


def exact_prob_J(n: int, l: int, family: WeylFamily) -> Fraction:
    """Exact Prob(J^l): l independent uniform elements share no achievable
    proper size (families A, C) or (size, sign) pair (families B, D)."""
    _check_capacity(n, family)
    if not isinstance(l, int) or l < 1:
        raise ValidationError(f"l must be a positive integer, got {l!r}")
    masses, univ = _masses(n, family)
    return _inclusion_exclusion(masses, univ, l)


def exact_prob_J_bruteforce(n: int, l: int, family: WeylFamily) -> Fraction:
    """Independent route to Prob(J^l): enumerate all l-tuples of distinct
    profiles (with aggregated probabilities) and evaluate the event per
    tuple with the runtime event evaluator.  For family C this enumerates
    the signed table and projects, so it is capped at the signed limit.
    Exponential in l; meant for n <= 6, l <= 3 cross-checks.
    """
    if not isinstance(l, int) or l < 1:
        raise ValidationError(f"l must be a positive integer, got {l!r}")
    if family is WeylFamily.C:
        if n > SIGNED_LIMIT:
            raise CapacityError(
                f"brute force for family C projects the signed table, n <= {SIGNED_LIMIT} (got {n})"
            )
        table = enumerate_classes(n, WeylFamily.B)
        profiles = [(fixed_sizes(project(label)), p) for label, p in table.entries]
    else:
        _check_capacity(n, family)
        table = enumerate_classes(n, family)
        if family.signed_profiles:
            profiles = [(signed_fixed_sets(label), p) for label, p in table.entries]
        else:
            profiles = [(fixed_sizes(label), p) for label, p in table.entries]
    # group identical profiles, keeping one representative object
    grouped: dict[int, list] = {}
    for prof, p in profiles:
        key = _combined_mask(prof)
        if key in grouped:
            grouped[key][1] += p
        else:
            grouped[key] = [prof, p]
    reps = list(grouped.values())
    total = Fraction(0)
    for combo in itertools.product(reps, repeat=l):
        if event_J([prof for prof, _ in combo], family):
            prob = Fraction(1)
            for _, p in combo:
                prob *= p
            total += prob
    return total


def exact_prob_predicate(
    n: int, family: WeylFamily, predicate: str, l: int | None = None
) -> Fraction:
    """Exact probability of a per-element predicate (all_even, all_positive)
    or of the l-element same-sign event.

    all_even and all_positive are single-element masses; raise to the l-th
    power for the all-l event (elements are independent).  same_sign is
    computed from the family's table as (sum of + mass)^l + (sum of - mass)^l,
    which gives 2^(1-l) for B and C and 1 for the D sectors (vacuously
    same-signed).  l is required for same_sign and rejected otherwise.
    """
    _check_capacity(n, family)
    if predicate in ("all_even", "all_positive") and l is not None:
        raise ValidationError(
            f"{predicate} is a single-element mass; l applies only to same_sign"
        )
    if predicate == "all_even":
        table = enumerate_classes(n, family)
        if family.signed_labels:
            return sum(
                (p for label, p in table.entries if all_cycles_even(project(label))),
                Fraction(0),
            )
        return sum(
            (p for label, p in table.entries if all_cycles_even(label)), Fraction(0)
        )
    if predicate == "all_positive":
        if not family.signed_labels:
            raise ValidationError("all_positive needs a signed family (B, C, D+, D-)")
        table = enumerate_classes(n, family)
        return sum(
            (p for label, p in table.entries if all_cycles_positive(label)), Fraction(0)
        )
    if predicate == "same_sign":
        if not family.signed_labels:
            raise ValidationError("same_sign needs a signed family (B, C, D+, D-)")
        if not isinstance(l, int) or l < 1:
            raise ValidationError(f"same_sign needs l >= 1, got {l!r}")
        table = enumerate_classes(n, family)
        mass_plus = sum(
            (p for label, p in table.entries if label.total_sign == 1), Fraction(0)
        )
        mass_minus = 1 - mass_plus
        return mass_plus**l + mass_minus**l
    raise ValidationError(
        f"unknown predicate {predicate!r}; expected all_even, all_positive or same_sign"
    )


def exact_prob_J_and_not_N(n: int, l: int, family: WeylFamily) -> Fraction:
    """Exact Prob(J and not N) for signed-label families.

    Prob(J and all signs equal to e) is the same inclusion-exclusion with
    the single-element masses restricted to the sign-e sector, so
    Prob(J and not N) = Prob(J) - sum_e Prob(J and all signs e).  Needs the
    signed table even for family C, hence the signed capacity applies.
    """
    if not family.signed_labels:
        raise ValidationError("J_and_not_N needs a signed family (B, C, D+, D-)")
    if not isinstance(l, int) or l < 1:
        raise ValidationError(f"l must be a positive integer, got {l!r}")
    if n > SIGNED_LIMIT:
        raise CapacityError(
            f"exact J_and_not_N enumerates signed classes, n <= {SIGNED_LIMIT} (got {n})"
        )
    _check_capacity(n, WeylFamily.B)
    if family.sector_sign is not None:
        return Fraction(0)  # within a sector all signs agree, N always holds
    table = enumerate_classes(n, family)
    signed = family.signed_profiles
    univ = 2 * (n - 1) if signed else n - 1
    total_masses: dict[int, Fraction] = {}
    sector_masses = {1: {}, -1: {}}
    for label, p in table.entries:
        prof = signed_fixed_sets(label) if signed else fixed_sizes(project(label))
        mask = _combined_mask(prof)
        total_masses[mask] = total_masses.get(mask, Fraction(0)) + p
        sec = sector_masses[label.total_sign]
        sec[mask] = sec.get(mask, Fraction(0)) + p
    p_j = _inclusion_exclusion(total_masses, univ, l)
    p_j_and_n = sum(
        (_inclusion_exclusion(sector_masses[e], univ, l) for e in (1, -1)), Fraction(0)
    )
    return p_j - p_j_and_n
