"""Exactly-representable distribution families over bit strings.

Every family exposes an evaluator (exact probability mass, rational where the
parameters are rational) and a generator (sampling against a caller-supplied
RNG), plus total variation, embedding/marginalization, JSON serialization,
and the two query oracles: counted sampling and tolerance-tau statistical
queries in exact, empirical, and adversarial modes.
"""

from __future__ import annotations

import itertools
import math
import random
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .gf2 import AffineSubspace, BitMatrix, BitVec, max_independent_subset
from .statevector import DenseDist

DIST_SCHEMA = "dist_v1"

# Largest combined support enumerated by tv() and exact expectations.
_SUPPORT_BUDGET = 1 << 22

_MAX_TABLE_BITS = 20


class Dist(ABC):
    """A distribution over {0,1}^n with an exact evaluator and a generator."""

    n: int

    @abstractmethod
    def eval(self, x: BitVec):
        """Probability of x; Fraction when the parameters are rational."""

    @abstractmethod
    def sample(self, rng) -> BitVec:
        """One draw distributed per eval."""

    @property
    @abstractmethod
    def support_size(self) -> int:
        """Number of points the support iterator yields."""

    @abstractmethod
    def support(self) -> Iterator[BitVec]:
        """Every x with eval(x) > 0, without repetition."""

    def _check_len(self, x: BitVec) -> None:
        if x.n != self.n:
            raise ValueError(f"expected {self.n}-bit input, got {x.n}")


class AffineUniform(Dist):
    """Uniform distribution on an affine subspace; mass 2^-dim per member."""

    def __init__(self, subspace: AffineSubspace):
        self.subspace = subspace
        self.n = subspace.n
        self._mass = Fraction(1, subspace.size)

    def eval(self, x: BitVec) -> Fraction:
        self._check_len(x)
        return self._mass if self.subspace.contains(x) else Fraction(0)

    def sample(self, rng) -> BitVec:
        return self.subspace.sample(rng)

    @property
    def support_size(self) -> int:
        return self.subspace.size

    def support(self) -> Iterator[BitVec]:
        return self.subspace.elements()


def uniform(n: int) -> AffineUniform:
    return AffineUniform(AffineSubspace.full(n))


class PointMass(Dist):
    def __init__(self, value: BitVec):
        self.value = value
        self.n = value.n

    def eval(self, x: BitVec) -> Fraction:
        self._check_len(x)
        return Fraction(1) if x == self.value else Fraction(0)

    def sample(self, rng) -> BitVec:
        return self.value

    @property
    def support_size(self) -> int:
        return 1

    def support(self) -> Iterator[BitVec]:
        yield self.value


class NoisyParity(Dist):
    """Uniform x on k bits paired with its s-parity, flipped with rate eta.

    eta may be any rational or float in [0, 1); the regime of interest is
    below 1/2, where the parity bit still carries signal.
    """

    def __init__(self, s: BitVec, eta, k: int | None = None):
        if k is not None and k != s.n:
            raise ValueError("k does not match len(s)")
        if not 0 <= eta < 1:
            raise ValueError("eta must lie in [0, 1)")
        self.s = s
        self.eta = eta
        self.k = s.n
        self.n = s.n + 1

    def eval(self, x: BitVec):
        self._check_len(x)
        base = Fraction(1, 1 << self.k)
        if x[self.k] == x.take(self.k).dot(self.s):
            return base * (1 - self.eta)
        return base * self.eta

    def sample(self, rng) -> BitVec:
        xb = rng.getrandbits(self.k)
        y = (xb & self.s.bits).bit_count() & 1
        if rng.random() < self.eta:
            y ^= 1
        return BitVec(self.n, xb | (y << self.k))

    @property
    def support_size(self) -> int:
        return (1 << self.k) if self.eta == 0 else (1 << self.n)

    def support(self) -> Iterator[BitVec]:
        if self.eta == 0:
            for xb in range(1 << self.k):
                y = (xb & self.s.bits).bit_count() & 1
                yield BitVec(self.n, xb | (y << self.k))
        else:
            for v in range(1 << self.n):
                yield BitVec(self.n, v)


class FunctionDist(Dist):
    """Pairs x ~ base with y = f(x); the evaluator vanishes off the graph."""

    def __init__(self, table: Sequence[int], base: Dist):
        if base.n > _MAX_TABLE_BITS:
            raise ValueError(f"truth tables supported up to {_MAX_TABLE_BITS} input bits")
        if len(table) != 1 << base.n:
            raise ValueError("truth table length must be 2^n")
        if any(v not in (0, 1) for v in table):
            raise ValueError("truth table entries must be bits")
        self.table = tuple(table)
        self.base = base
        self.n = base.n + 1

    def eval(self, x: BitVec):
        self._check_len(x)
        head = x.take(self.base.n)
        if x[self.base.n] != self.table[head.bits]:
            return Fraction(0)
        return self.base.eval(head)

    def sample(self, rng) -> BitVec:
        x = self.base.sample(rng)
        return BitVec(self.n, x.bits | (self.table[x.bits] << self.base.n))

    @property
    def support_size(self) -> int:
        return self.base.support_size

    def support(self) -> Iterator[BitVec]:
        for x in self.base.support():
            yield BitVec(self.n, x.bits | (self.table[x.bits] << self.base.n))


class Product(Dist):
    """Independent concatenation of component distributions."""

    def __init__(self, parts: Sequence[Dist]):
        if not parts:
            raise ValueError("product needs at least one component")
        self.parts = tuple(parts)
        self.n = sum(p.n for p in self.parts)

    def eval(self, x: BitVec):
        self._check_len(x)
        total = Fraction(1)
        off = 0
        for p in self.parts:
            total *= p.eval(x.drop(off).take(p.n))
            if total == 0:
                return total
            off += p.n
        return total

    def sample(self, rng) -> BitVec:
        out = BitVec(0, 0)
        for p in self.parts:
            out = out.concat(p.sample(rng))
        return out

    @property
    def support_size(self) -> int:
        total = 1
        for p in self.parts:
            total *= p.support_size
        return total

    def support(self) -> Iterator[BitVec]:
        for combo in itertools.product(*(list(p.support()) for p in self.parts)):
            out = BitVec(0, 0)
            for piece in combo:
                out = out.concat(piece)
            yield out


class Dense(Dist):
    """Wrapper over an explicit probability table."""

    def __init__(self, table: DenseDist):
        self.table = table
        self.n = table.n

    def eval(self, x: BitVec) -> float:
        self._check_len(x)
        return self.table.prob(x)

    def sample(self, rng) -> BitVec:
        return self.table.sample(rng)

    @property
    def support_size(self) -> int:
        return int((self.table.probs > 0).sum())

    def support(self) -> Iterator[BitVec]:
        for idx in range(1 << self.n):
            if self.table.probs[idx] > 0:
                yield BitVec(self.n, idx)


def _tv_affine(p: AffineUniform, q: AffineUniform) -> Fraction:
    a, b = p.subspace, q.subspace
    inter = a.intersection_dim(b)
    if inter is None:
        return Fraction(1)
    pa = Fraction(1, a.size)
    pb = Fraction(1, b.size)
    common = 1 << inter
    total = common * abs(pa - pb) + (a.size - common) * pa + (b.size - common) * pb
    return total / 2


def tv(p: Dist, q: Dist):
    """Total variation distance, exact wherever the supports are enumerable."""
    if p.n != q.n:
        raise ValueError("distributions have different bit lengths")
    if p is q:
        return Fraction(0)
    if isinstance(p, AffineUniform) and isinstance(q, AffineUniform):
        return _tv_affine(p, q)
    if p.support_size + q.support_size <= _SUPPORT_BUDGET:
        total = 0
        seen = set()
        for x in p.support():
            seen.add(x.bits)
            total += abs(p.eval(x) - q.eval(x))
        for x in q.support():
            if x.bits not in seen:
                total += q.eval(x)
        return total / 2
    if p.n <= _MAX_TABLE_BITS:
        total = 0.0
        for idx in range(1 << p.n):
            x = BitVec(p.n, idx)
            total += abs(float(p.eval(x)) - float(q.eval(x)))
        return total / 2
    raise ValueError("tv infeasible for this pair of distributions")


def embed(d: Dist, n: int) -> Dist:
    """Pad to n bits with a point mass at zero on the trailing bits."""
    if n < d.n:
        raise ValueError("cannot embed into fewer bits")
    if n == d.n:
        return d
    return Product((d, PointMass(BitVec.zeros(n - d.n))))


def marginalize(d: Dist, k: int) -> Dist:
    """Marginal of the first k bits; inverts embed on embedded distributions."""
    if not 0 <= k <= d.n:
        raise ValueError("marginal length out of range")
    if k == d.n:
        return d
    if isinstance(d, Product):
        kept: list[Dist] = []
        acc = 0
        for part in d.parts:
            if acc + part.n <= k:
                kept.append(part)
                acc += part.n
                if acc == k:
                    break
            else:
                kept.append(marginalize(part, k - acc))
                break
        if len(kept) == 1:
            return kept[0]
        return Product(kept)
    if isinstance(d, PointMass):
        return PointMass(d.value.take(k))
    if isinstance(d, AffineUniform):
        sub = d.subspace
        cols = [BitVec(k, c) for c in sub._cols]
        idx = max_independent_subset(cols)
        basis = BitMatrix.from_cols([cols[i] for i in idx], rows=k)
        return AffineUniform(AffineSubspace(basis, sub.shift.take(k)))
    if isinstance(d, NoisyParity):
        return uniform(k)
    if isinstance(d, FunctionDist):
        return marginalize(d.base, k)
    if isinstance(d, Dense):
        probs = d.table.probs.reshape(1 << (d.n - k), 1 << k).sum(axis=0)
        return Dense(DenseDist(k, probs))
    raise ValueError(f"marginalization not supported for {type(d).__name__}")


# --- serialization (schema "dist_v1") -------------------------------------


def _eta_to_json(eta):
    if eta == 0:
        return 0
    if isinstance(eta, Fraction):
        return f"{eta.numerator}/{eta.denominator}"
    return float(eta)


def _eta_from_json(v):
    if isinstance(v, str):
        num, den = v.split("/")
        return Fraction(int(num), int(den))
    return v


def dist_to_json(d: Dist) -> dict:
    if isinstance(d, AffineUniform):
        sub = d.subspace
        return {
            "schema": DIST_SCHEMA,
            "kind": "affine_uniform",
            "n": sub.n,
            "dim": sub.dim,
            "basis_rows": [sub.basis.row(i).to_hex() for i in range(sub.n)],
            "shift": sub.shift.to_hex(),
        }
    if isinstance(d, NoisyParity):
        return {
            "schema": DIST_SCHEMA,
            "kind": "noisy_parity",
            "k": d.k,
            "s": d.s.to_hex(),
            "eta": _eta_to_json(d.eta),
        }
    if isinstance(d, FunctionDist):
        packed = 0
        for i, v in enumerate(d.table):
            packed |= v << i
        return {
            "schema": DIST_SCHEMA,
            "kind": "function",
            "table": format(packed, "x"),
            "base": dist_to_json(d.base),
        }
    if isinstance(d, PointMass):
        return {
            "schema": DIST_SCHEMA,
            "kind": "point_mass",
            "n": d.n,
            "value": d.value.to_hex(),
        }
    if isinstance(d, Product):
        return {
            "schema": DIST_SCHEMA,
            "kind": "product",
            "parts": [dist_to_json(p) for p in d.parts],
        }
    if isinstance(d, Dense):
        return {
            "schema": DIST_SCHEMA,
            "kind": "dense",
            "n": d.n,
            "probs": [float(v) for v in d.table.probs],
        }
    raise ValueError(f"cannot serialize {type(d).__name__}")


def dist_from_json(obj: dict) -> Dist:
    if obj.get("schema") != DIST_SCHEMA:
        raise ValueError(f"unsupported schema {obj.get('schema')!r}")
    kind = obj["kind"]
    if kind == "affine_uniform":
        n, dim = obj["n"], obj["dim"]
        basis = BitMatrix(n, dim, [int(r, 16) for r in obj["basis_rows"]])
        return AffineUniform(AffineSubspace(basis, BitVec.from_hex(n, obj["shift"])))
    if kind == "noisy_parity":
        return NoisyParity(BitVec.from_hex(obj["k"], obj["s"]), _eta_from_json(obj["eta"]))
    if kind == "function":
        base = dist_from_json(obj["base"])
        packed = int(obj["table"], 16)
        table = [(packed >> i) & 1 for i in range(1 << base.n)]
        return FunctionDist(table, base)
    if kind == "point_mass":
        return PointMass(BitVec.from_hex(obj["n"], obj["value"]))
    if kind == "product":
        return Product([dist_from_json(p) for p in obj["parts"]])
    if kind == "dense":
        import numpy as np

        return Dense(DenseDist(obj["n"], np.array(obj["probs"], dtype=float)))
    raise ValueError(f"unknown dist kind {kind!r}")


# --- oracles ---------------------------------------------------------------


class SampleOracle:
    """Query-counted sampling access to a distribution."""

    def __init__(self, dist: Dist, rng):
        self.dist = dist
        self.rng = rng
        self.queries = 0

    def draw(self) -> BitVec:
        self.queries += 1
        return self.dist.sample(self.rng)


class ParityCorrelation:
    """phi(x, y) = (-1)^(y + t.x): +1 when the last bit matches the t-parity
    of the first len(t) bits. Recognized by StatOracle for closed-form
    expectations against parity-style distributions."""

    __slots__ = ("t",)

    def __init__(self, t: BitVec):
        self.t = t

    def __call__(self, xy: BitVec) -> int:
        k = self.t.n
        if xy.n != k + 1:
            raise ValueError("input length must be len(t)+1")
        return 1 - 2 * (xy[k] ^ xy.take(k).dot(self.t))


def _expectation(dist: Dist, phi: Callable[[BitVec], float]):
    """Exact E[phi(x)] under dist."""
    if isinstance(phi, ParityCorrelation):
        if isinstance(dist, NoisyParity) and dist.k == phi.t.n:
            return (1 - 2 * dist.eta) * (1 if dist.s == phi.t else 0)
        if isinstance(dist, FunctionDist) and dist.base.n == phi.t.n:
            total = 0
            for x in dist.base.support():
                sign = 1 - 2 * (dist.table[x.bits] ^ x.dot(phi.t))
                total += dist.base.eval(x) * sign
            return total
    if dist.support_size > _SUPPORT_BUDGET:
        raise ValueError("support too large for an exact expectation")
    total = 0
    for x in dist.support():
        total += dist.eval(x) * phi(x)
    return total


class StatOracle:
    """Tolerance-tau statistical-query access to a distribution.

    Modes:
      exact        responds with the true expectation;
      adversarial  true expectation plus a deterministic perturbation of
                   magnitude exactly tau, signed by a stream keyed to
                   adversary_seed (reproducible worst-ish-case responses);
      empirical    mean of samples_per_query fresh draws (Hoeffding count
                   ceil(ln(2/delta')/(2 tau^2)) via the `empirical`
                   constructor, which splits a failure budget over an
                   announced number of queries).

    Any tau in (0, 1) is accepted; responses are only informative for
    tolerances that are not exponentially small in the string length.
    """

    def __init__(self, dist: Dist, tau: float, mode: str = "exact", *,
                 rng=None, samples_per_query: int | None = None,
                 adversary_seed: int = 0):
        if not 0 < tau < 1:
            raise ValueError("tau must lie in (0, 1)")
        if mode not in ("exact", "empirical", "adversarial"):
            raise ValueError(f"unknown oracle mode {mode!r}")
        if mode == "empirical":
            if rng is None or samples_per_query is None:
                raise ValueError("empirical mode needs rng and samples_per_query")
            if samples_per_query < 1:
                raise ValueError("samples_per_query must be positive")
        self.dist = dist
        self.tau = tau
        self.mode = mode
        self.rng = rng
        self.samples_per_query = samples_per_query
        self._adv_rng = random.Random(adversary_seed)
        self.queries = 0

    @classmethod
    def empirical(cls, dist: Dist, tau: float, rng, *, failure_prob: float,
                  query_budget: int) -> "StatOracle":
        if not 0 < failure_prob < 1 or query_budget < 1:
            raise ValueError("bad failure budget")
        per_query = failure_prob / query_budget
        count = math.ceil(math.log(2.0 / per_query) / (2.0 * tau * tau))
        return cls(dist, tau, "empirical", rng=rng, samples_per_query=count)

    def query(self, phi: Callable[[BitVec], float]):
        """Respond with v such that |E[phi] - v| <= tau (with the declared
        failure probability in empirical mode)."""
        self.queries += 1
        if self.mode == "empirical":
            total = 0.0
            for _ in range(self.samples_per_query):
                total += phi(self.dist.sample(self.rng))
            return total / self.samples_per_query
        truth = _expectation(self.dist, phi)
        if self.mode == "exact":
            return truth
        sign = 1 if self._adv_rng.getrandbits(1) else -1
        return truth + self.tau * sign
