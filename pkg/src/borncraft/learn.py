"""Learners: affine-subspace recovery from samples, a correlation-query
baseline for parity distributions, and a brute-force noisy-parity solver
used as a small-scale verification oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dist import AffineUniform, SampleOracle, StatOracle, ParityCorrelation
from .gf2 import AffineSubspace, BitVec, max_independent_subset

MAX_BRUTE_FORCE_BITS = 20

_PARITY8 = np.array([bin(v).count("1") & 1 for v in range(256)], dtype=np.uint8)


@dataclass(frozen=True)
class LearnedAffine:
    """Recovered affine subspace plus the sample budget that produced it."""

    subspace: AffineSubspace
    samples_used: int

    def dist(self) -> AffineUniform:
        return AffineUniform(self.subspace)


@dataclass
class LearnReport:
    """Outcome record for one learning run."""

    success: bool | None
    tv_to_truth: float
    queries: int
    wall_time: float


def recover_affine(samples: Sequence[BitVec]) -> LearnedAffine:
    """Shift all samples by the first one and span the differences.

    The recovered set always contains every sample and is exact whenever the
    shifted samples span the underlying linear part.
    """
    if not samples:
        raise ValueError("need at least one sample")
    origin = samples[0]
    diffs = [x ^ origin for x in samples[1:]]
    idx = max_independent_subset(diffs)
    sub = AffineSubspace._from_cols(
        origin.n, tuple(diffs[i].bits for i in idx), origin.bits
    )
    return LearnedAffine(sub, len(samples))


def closure_learn(oracle: SampleOracle, n: int, delta: float) -> LearnedAffine:
    """Recover an affine-subspace distribution from n + ceil(log2(1/delta))
    samples (base-2 count; the failure probability is at most ~delta, with a
    factor-2 slack at full dimension because the first sample only seeds the
    shift)."""
    if n <= 0:
        raise ValueError("n must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    k = n + math.ceil(math.log2(1.0 / delta))
    samples = []
    for _ in range(k):
        x = oracle.draw()
        if x.n != n:
            raise ValueError("oracle sample length does not match n")
        samples.append(x)
    return recover_affine(samples)


def sq_correlation_learner(oracle: StatOracle, k: int, budget: int, rng) -> BitVec | None:
    """Probe candidate parities with correlation queries in a seeded random
    order; return the first candidate whose response exceeds 1/2, or None
    once the query budget is spent."""
    if k < 1:
        raise ValueError("k must be positive")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    total = 1 << k
    # Sparse Fisher-Yates: only the queried prefix of the permutation exists.
    slots: dict[int, int] = {}
    for i in range(min(budget, total)):
        j = i + rng.randrange(total - i)
        cand = slots.get(j, j)
        slots[j] = slots.get(i, i)
        t = BitVec(k, cand)
        if oracle.query(ParityCorrelation(t)) > 0.5:
            return t
    return None


def lpn_brute_force(samples: Sequence[tuple[BitVec, int]], k: int) -> BitVec:
    """Exhaustive agreement-count maximizer over all 2^k candidate parities.

    Ties break to the lexicographically smallest candidate bit string. Only
    viable at small k; the guard is a hard error.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if k > MAX_BRUTE_FORCE_BITS:
        raise ValueError(f"brute force limited to {MAX_BRUTE_FORCE_BITS} bits")
    if not samples:
        return BitVec.zeros(k)
    if any(x.n != k for x, _ in samples):
        raise ValueError("sample length does not match k")
    xs = np.array([x.bits for x, _ in samples], dtype=np.uint32)
    ys = np.array([y & 1 for _, y in samples], dtype=np.uint8)

    best_count = -1
    best_vec = BitVec.zeros(k)
    total = 1 << k
    chunk = 4096
    for lo in range(0, total, chunk):
        cands = np.arange(lo, min(lo + chunk, total), dtype=np.uint32)
        anded = cands[:, None] & xs[None, :]
        folded = anded ^ (anded >> np.uint32(16))
        folded ^= folded >> np.uint32(8)
        pred = _PARITY8[folded & np.uint32(0xFF)]
        agree = (pred == ys[None, :]).sum(axis=1)
        top = int(agree.max())
        if top < best_count:
            continue
        ties = cands[agree == top]
        cand = min((BitVec(k, int(c)) for c in ties), key=BitVec.to_str)
        if top > best_count or cand.to_str() < best_vec.to_str():
            best_count, best_vec = top, cand
    return best_vec
