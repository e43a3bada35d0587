"""Seeded Monte Carlo estimation of the tuple events at large n.

Each trial owns RNG stream `trial_index` of the master seed, so the result
is a pure function of the ExperimentSpec: thread count, chunking and
execution order cannot change it.  Trials may stop sampling as soon as the
event outcome is determined (say, the running intersection went empty);
that is safe for the same reason — no other trial reads this stream.

Per-trial cost at n = 10^6 is dominated by the subset-sum bitmask DP over
the sampled cycle lengths, about a millisecond; at small n the profile
masks repeat heavily and are memoized per cycle type.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from statistics import NormalDist

from .cycletypes import WeylFamily
from .errors import InvgenError, ValidationError
from .sampling import GOLDEN, M64, RngState, _sample_lengths, _sample_lengths_signs, mix64

EVENTS = ("J", "J_and_not_N", "N", "all_even", "all_positive")
_UNSIGNED_EVENTS = ("J", "all_even")  # family A has no signs to speak of
_CACHE_LIMIT = 16  # above this, cycle types almost never repeat


@dataclass(frozen=True)
class ExperimentSpec:
    n: int
    l: int
    family: WeylFamily
    event: str
    trials: int
    master_seed: int

    def validate(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.l, int) or self.l < 1:
            raise ValidationError(f"l must be a positive integer, got {self.l!r}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ValidationError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed <= M64:
            raise ValidationError(f"master_seed must be a 64-bit integer, got {self.master_seed!r}")
        if not isinstance(self.family, WeylFamily):
            raise ValidationError(f"family must be a WeylFamily, got {self.family!r}")
        if self.event not in EVENTS:
            raise ValidationError(f"unknown event {self.event!r}; expected one of {EVENTS}")
        if not self.family.signed_labels and self.event not in _UNSIGNED_EVENTS:
            raise ValidationError(
                f"event {self.event} needs a signed family (B, C, D+, D-); family A supports {_UNSIGNED_EVENTS}"
            )


@dataclass(frozen=True)
class Estimate:
    spec: ExperimentSpec
    successes: int
    p_hat: float
    ci_low: float
    ci_high: float
    confidence: float


def wilson_interval_z(successes: int, trials: int, z: float) -> tuple[float, float]:
    """Wilson score interval at a given z; stays sane at p near 0 or 1."""
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def wilson_interval(successes: int, trials: int, confidence: float = 0.99) -> tuple[float, float]:
    if not 0 < confidence < 1:
        raise ValidationError(f"confidence must be in (0,1), got {confidence!r}")
    z = NormalDist().inv_cdf((1 + confidence) / 2)
    return wilson_interval_z(successes, trials, z)


def _signed_masks_from_pairs(pairs, proper: int) -> tuple[int, int]:
    """Two-track subset-sum DP over (length, sign) pairs sorted ascending."""
    plus, minus = 1, 0
    for length, sign in pairs:
        if sign > 0:
            plus |= plus << length
            minus |= minus << length
        else:
            plus, minus = plus | (minus << length), minus | (plus << length)
    return plus & proper, minus & proper


def _count_J(spec: ExperimentSpec, start: int, stop: int, not_n: bool) -> int:
    """Successes of J (or J-and-not-N) over trials start..stop-1."""
    n, l, seed = spec.n, spec.l, spec.master_seed
    family = spec.family
    want = family.sector_sign
    signed_sampling = family.signed_labels
    signed_profiles = family.signed_profiles
    use_cache = n <= _CACHE_LIMIT
    cache: dict = {}
    proper = (1 << n) - 2
    successes = 0
    for t in range(start, stop):
        rng = RngState(seed, t)
        inter_p = inter_m = inter = proper
        empty = n == 1
        first_sign = 0
        sign_diff = False
        for _ in range(l):
            if signed_sampling:
                lengths, signs = _sample_lengths_signs(rng, n)
                if want is not None:
                    minus_count = sum(1 for s in signs if s < 0)
                    if (-1 if minus_count & 1 else 1) != want:
                        signs[-1] = -signs[-1]
                if not_n:
                    minus_count = sum(1 for s in signs if s < 0)
                    total = -1 if minus_count & 1 else 1
                    if first_sign == 0:
                        first_sign = total
                    elif total != first_sign:
                        sign_diff = True
            else:
                lengths = _sample_lengths(rng, n)
            if signed_profiles:
                key = tuple(sorted(zip(lengths, signs)))
                if use_cache:
                    masks = cache.get(key)
                    if masks is None:
                        masks = _signed_masks_from_pairs(key, proper)
                        cache[key] = masks
                else:
                    masks = _signed_masks_from_pairs(key, proper)
                inter_p &= masks[0]
                inter_m &= masks[1]
                empty = not (inter_p | inter_m)
            else:
                lengths.sort()
                key = tuple(lengths)
                if use_cache:
                    mask = cache.get(key)
                    if mask is None:
                        acc = 1
                        for length in key:
                            acc |= acc << length
                        mask = acc & proper
                        cache[key] = mask
                else:
                    acc = 1
                    for length in key:
                        acc |= acc << length
                    mask = acc & proper
                inter &= mask
                empty = inter == 0
            if empty and (sign_diff or not not_n):
                break
        if not_n:
            successes += 1 if empty and sign_diff else 0
        else:
            successes += 1 if empty else 0
    return successes


def _count_N(spec: ExperimentSpec, start: int, stop: int) -> int:
    n, l, seed = spec.n, spec.l, spec.master_seed
    want = spec.family.sector_sign
    successes = 0
    for t in range(start, stop):
        rng = RngState(seed, t)
        first_sign = 0
        same = True
        for _ in range(l):
            _, signs = _sample_lengths_signs(rng, n)
            minus_count = sum(1 for s in signs if s < 0)
            total = -1 if minus_count & 1 else 1
            if want is not None and total != want:
                total = want  # conditioned flip changes only the last sign's parity
            if first_sign == 0:
                first_sign = total
            elif total != first_sign:
                same = False
                break
        successes += 1 if same else 0
    return successes


def _count_all_even(spec: ExperimentSpec, start: int, stop: int) -> int:
    n, l, seed = spec.n, spec.l, spec.master_seed
    signed_sampling = spec.family.signed_labels
    successes = 0
    for t in range(start, stop):
        rng = RngState(seed, t)
        ok = True
        for _ in range(l):
            if signed_sampling:
                lengths, _ = _sample_lengths_signs(rng, n)
            else:
                lengths = _sample_lengths(rng, n)
            if any(length & 1 for length in lengths):
                ok = False
                break
        successes += 1 if ok else 0
    return successes


def _count_all_positive(spec: ExperimentSpec, start: int, stop: int) -> int:
    n, l, seed = spec.n, spec.l, spec.master_seed
    want = spec.family.sector_sign
    successes = 0
    for t in range(start, stop):
        rng = RngState(seed, t)
        ok = True
        for _ in range(l):
            _, signs = _sample_lengths_signs(rng, n)
            if want is not None:
                minus_count = sum(1 for s in signs if s < 0)
                if (-1 if minus_count & 1 else 1) != want:
                    signs[-1] = -signs[-1]
            if any(s < 0 for s in signs):
                ok = False
                break
        successes += 1 if ok else 0
    return successes


def _count_range(spec: ExperimentSpec, start: int, stop: int) -> int:
    if spec.event == "J":
        return _count_J(spec, start, stop, not_n=False)
    if spec.event == "J_and_not_N":
        return _count_J(spec, start, stop, not_n=True)
    if spec.event == "N":
        return _count_N(spec, start, stop)
    if spec.event == "all_even":
        return _count_all_even(spec, start, stop)
    return _count_all_positive(spec, start, stop)


def run(spec: ExperimentSpec, threads: int = 1, confidence: float = 0.99) -> Estimate:
    """Run all trials of a spec and return the estimate with its Wilson
    interval.  Identical output for every thread count: trials are chunked
    deterministically and success counts add associatively."""
    spec.validate()
    if not isinstance(threads, int) or threads < 1:
        raise ValidationError(f"threads must be a positive integer, got {threads!r}")
    trials = spec.trials
    if threads == 1:
        successes = _count_range(spec, 0, trials)
    else:
        chunks = min(threads * 4, trials)
        bounds = [(i * trials // chunks, (i + 1) * trials // chunks) for i in range(chunks)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            successes = sum(pool.map(_count_chunk, [(spec, a, b) for a, b in bounds]))
    ci_low, ci_high = wilson_interval(successes, trials, confidence)
    return Estimate(
        spec=spec,
        successes=successes,
        p_hat=successes / trials,
        ci_low=ci_low,
        ci_high=ci_high,
        confidence=confidence,
    )


def _count_chunk(job) -> int:
    spec, start, stop = job
    return _count_range(spec, start, stop)


def sweep_seed(master_seed: int, index: int) -> int:
    """Effective master seed for sweep position `index`; distinct positions
    get unrelated streams even for otherwise identical specs."""
    return mix64(master_seed ^ ((index + 1) * GOLDEN & M64))


def sweep(specs, threads: int = 1, confidence: float = 0.99) -> list[Estimate]:
    """Run several specs with per-index derived master seeds, in order.

    Each returned Estimate carries the spec with its effective seed filled
    in, so any row can be reproduced on its own with `run`.
    """
    specs = list(specs)
    if not specs:
        raise ValidationError("sweep needs at least one spec")
    out = []
    for i, spec in enumerate(specs):
        if not isinstance(spec, ExperimentSpec):
            raise ValidationError(f"spec {i}: expected an ExperimentSpec, got {spec!r}")
        effective = replace(spec, master_seed=sweep_seed(spec.master_seed, i))
        try:
            out.append(run(effective, threads=threads, confidence=confidence))
        except InvgenError as exc:
            raise type(exc)(f"spec {i}: {exc}") from exc
    return out
