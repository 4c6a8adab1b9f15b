"""Bit-packed linear algebra over GF(2): vectors, matrices, affine subspaces."""

from __future__ import annotations

from typing import Iterator, Sequence


def _lsb(x: int) -> int:
    """Index of the lowest set bit of a nonzero int."""
    return (x & -x).bit_length() - 1


def _reduce(pivots: dict[int, int], v: int) -> int:
    """Reduce v against pivot rows keyed by their lowest set bit."""
    while v:
        row = pivots.get(_lsb(v))
        if row is None:
            return v
        v ^= row
    return 0


def _build_pivots(vecs) -> dict[int, int]:
    pivots: dict[int, int] = {}
    for v in vecs:
        w = _reduce(pivots, v)
        if w:
            pivots[_lsb(w)] = w
    return pivots


class BitVec:
    """Immutable vector over GF(2); component i is bit i of ``bits``.

    Bits beyond ``n`` are masked off at construction.
    """

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int = 0):
        if n < 0:
            raise ValueError("BitVec length must be nonnegative")
        self.n = n
        self.bits = bits & ((1 << n) - 1)

    @classmethod
    def zeros(cls, n: int) -> "BitVec":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "BitVec":
        return cls(n, (1 << n) - 1)

    @classmethod
    def from_str(cls, s: str) -> "BitVec":
        """Parse "0110..."; the first character is component 0."""
        bits = 0
        for i, ch in enumerate(s):
            if ch == "1":
                bits |= 1 << i
            elif ch != "0":
                raise ValueError(f"invalid bit character {ch!r}")
        return cls(len(s), bits)

    @classmethod
    def from_bits(cls, seq: Sequence[int]) -> "BitVec":
        bits = 0
        for i, b in enumerate(seq):
            if b:
                bits |= 1 << i
        return cls(len(seq), bits)

    @classmethod
    def random(cls, rng, n: int) -> "BitVec":
        return cls(n, rng.getrandbits(n) if n else 0)

    @classmethod
    def from_hex(cls, n: int, s: str) -> "BitVec":
        return cls(n, int(s, 16))

    def to_hex(self) -> str:
        return format(self.bits, "x")

    def to_str(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"bit index {i} out of range for length {self.n}")
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.n != other.n:
            raise ValueError("length mismatch in XOR")
        return BitVec(self.n, self.bits ^ other.bits)

    def dot(self, other: "BitVec") -> int:
        """Inner product mod 2."""
        if self.n != other.n:
            raise ValueError("length mismatch in dot product")
        return (self.bits & other.bits).bit_count() & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def concat(self, other: "BitVec") -> "BitVec":
        return BitVec(self.n + other.n, self.bits | (other.bits << self.n))

    def take(self, k: int) -> "BitVec":
        """First k components."""
        if not 0 <= k <= self.n:
            raise ValueError("take length out of range")
        return BitVec(k, self.bits)

    def drop(self, k: int) -> "BitVec":
        """Components k..n-1."""
        if not 0 <= k <= self.n:
            raise ValueError("drop length out of range")
        return BitVec(self.n - k, self.bits >> k)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVec) and self.n == other.n and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __repr__(self) -> str:
        return f"BitVec('{self.to_str()}')"


class BitMatrix:
    """rows x cols matrix over GF(2), row-major; bit j of data[i] is entry (i, j)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[int]):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(data) != rows:
            raise ValueError("row count does not match data")
        mask = (1 << cols) - 1
        self.rows = rows
        self.cols = cols
        self.data = tuple(r & mask for r in data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, [0] * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_rows(cls, vs: Sequence[BitVec], cols: int | None = None) -> "BitMatrix":
        if cols is None:
            if not vs:
                raise ValueError("cols required for an empty row list")
            cols = vs[0].n
        if any(v.n != cols for v in vs):
            raise ValueError("rows have mixed lengths")
        return cls(len(vs), cols, [v.bits for v in vs])

    @classmethod
    def from_cols(cls, vs: Sequence[BitVec], rows: int | None = None) -> "BitMatrix":
        if rows is None:
            if not vs:
                raise ValueError("rows required for an empty column list")
            rows = vs[0].n
        if any(v.n != rows for v in vs):
            raise ValueError("columns have mixed lengths")
        data = [0] * rows
        for j, v in enumerate(vs):
            for i in range(rows):
                if (v.bits >> i) & 1:
                    data[i] |= 1 << j
        return cls(rows, len(vs), data)

    def row(self, i: int) -> BitVec:
        return BitVec(self.cols, self.data[i])

    def col(self, j: int) -> BitVec:
        if not 0 <= j < self.cols:
            raise IndexError("column index out of range")
        bits = 0
        for i in range(self.rows):
            if (self.data[i] >> j) & 1:
                bits |= 1 << i
        return BitVec(self.rows, bits)

    def transpose(self) -> "BitMatrix":
        data = [0] * self.cols
        for i, r in enumerate(self.data):
            while r:
                j = _lsb(r)
                data[j] |= 1 << i
                r &= r - 1
        return BitMatrix(self.cols, self.rows, data)

    def mul_vec(self, v: BitVec) -> BitVec:
        """Matrix times column vector (length cols -> length rows)."""
        if v.n != self.cols:
            raise ValueError("dimension mismatch")
        bits = 0
        for i, r in enumerate(self.data):
            if (r & v.bits).bit_count() & 1:
                bits |= 1 << i
        return BitVec(self.rows, bits)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def rank(m: BitMatrix) -> int:
    """Dimension of the row space."""
    return len(_build_pivots(m.data))


def max_independent_subset(vs: Sequence[BitVec]) -> list[int]:
    """Indices of a maximal linearly independent subset, greedy in input order.

    Pivoting is by lowest set bit, first-seen vector; the result is
    deterministic and the indexed vectors span span(vs).
    """
    if not vs:
        return []
    n = vs[0].n
    pivots: dict[int, int] = {}
    out: list[int] = []
    for idx, v in enumerate(vs):
        if v.n != n:
            raise ValueError("vectors have mixed lengths")
        w = _reduce(pivots, v.bits)
        if w:
            pivots[_lsb(w)] = w
            out.append(idx)
    return out


def in_affine_span(r: BitMatrix, t: BitVec, x: BitVec) -> bool:
    """True iff x lies in {r.b + t : b}, i.e. x + t is in the column span of r."""
    if r.rows != x.n or t.n != x.n:
        raise ValueError("dimension mismatch")
    pivots = _build_pivots(r.col(j).bits for j in range(r.cols))
    return _reduce(pivots, x.bits ^ t.bits) == 0


def _rref(rows: list[int], width: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form over the first `width` columns."""
    work = list(rows)
    pivcols: list[int] = []
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, len(work)) if (work[i] >> c) & 1), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(len(work)):
            if i != r and (work[i] >> c) & 1:
                work[i] ^= work[r]
        pivcols.append(c)
        r += 1
    return work, pivcols


def solve(m: BitMatrix, b: BitVec) -> BitVec | None:
    """One solution x of m.x = b, or None if the system is inconsistent."""
    if b.n != m.rows:
        raise ValueError("dimension mismatch")
    aug = [m.data[i] | (((b.bits >> i) & 1) << m.cols) for i in range(m.rows)]
    work, pivcols = _rref(aug, m.cols)
    mask = (1 << m.cols) - 1
    for row in work:
        if row and not (row & mask):
            return None
    bits = 0
    for j, c in enumerate(pivcols):
        if (work[j] >> m.cols) & 1:
            bits |= 1 << c
    return BitVec(m.cols, bits)


def nullspace(m: BitMatrix) -> list[BitVec]:
    """Basis of {v : m.v = 0}."""
    work, pivcols = _rref(list(m.data), m.cols)
    pivset = set(pivcols)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        bits = 1 << free
        for j, c in enumerate(pivcols):
            if (work[j] >> free) & 1:
                bits |= 1 << c
        basis.append(BitVec(m.cols, bits))
    return basis


class AffineSubspace:
    """A = {basis.b + shift : b in F2^dim} with independent basis columns.

    Values are immutable after construction and safe to share.
    """

    __slots__ = ("basis", "shift", "_cols")

    def __init__(self, basis: BitMatrix, shift: BitVec):
        if basis.rows != shift.n:
            raise ValueError("basis/shift dimension mismatch")
        cols = tuple(basis.col(j).bits for j in range(basis.cols))
        if len(_build_pivots(cols)) != len(cols):
            raise ValueError("basis columns are dependent")
        self.basis = basis
        self.shift = shift
        self._cols = cols

    @classmethod
    def _from_cols(cls, n: int, cols: Sequence[int], shift_bits: int) -> "AffineSubspace":
        """Construct from known-independent packed column vectors."""
        sub = object.__new__(cls)
        sub.basis = BitMatrix.from_cols([BitVec(n, c) for c in cols], rows=n)
        sub.shift = BitVec(n, shift_bits)
        sub._cols = tuple(c & ((1 << n) - 1) for c in cols)
        return sub

    @classmethod
    def point(cls, t: BitVec) -> "AffineSubspace":
        return cls._from_cols(t.n, (), t.bits)

    @classmethod
    def full(cls, n: int) -> "AffineSubspace":
        return cls._from_cols(n, tuple(1 << i for i in range(n)), 0)

    @classmethod
    def random(cls, rng, n: int, m: int) -> "AffineSubspace":
        """Uniformly shifted subspace with m independent random basis vectors."""
        if not 0 <= m <= n:
            raise ValueError("dimension out of range")
        pivots: dict[int, int] = {}
        cols: list[int] = []
        while len(cols) < m:
            v = rng.getrandbits(n)
            w = _reduce(pivots, v)
            if w:
                pivots[_lsb(w)] = w
                cols.append(v)
        return cls._from_cols(n, cols, rng.getrandbits(n) if n else 0)

    @property
    def n(self) -> int:
        return self.shift.n

    @property
    def dim(self) -> int:
        return len(self._cols)

    @property
    def size(self) -> int:
        return 1 << self.dim

    def contains(self, x: BitVec) -> bool:
        if x.n != self.n:
            raise ValueError("dimension mismatch")
        return _reduce(_build_pivots(self._cols), x.bits ^ self.shift.bits) == 0

    def sample(self, rng) -> BitVec:
        b = rng.getrandbits(self.dim) if self.dim else 0
        acc = self.shift.bits
        for j, c in enumerate(self._cols):
            if (b >> j) & 1:
                acc ^= c
        return BitVec(self.n, acc)

    def elements(self) -> Iterator[BitVec]:
        """All 2^dim members, enumerated by Gray code."""
        x = self.shift.bits
        yield BitVec(self.n, x)
        for i in range(1, self.size):
            x ^= self._cols[_lsb(i)]
            yield BitVec(self.n, x)

    def same_set(self, other: "AffineSubspace") -> bool:
        """Set equality of the two subspaces."""
        if self.n != other.n or self.dim != other.dim:
            return False
        pivots = _build_pivots(self._cols)
        if _reduce(pivots, self.shift.bits ^ other.shift.bits):
            return False
        return all(_reduce(pivots, c) == 0 for c in other._cols)

    def intersection_dim(self, other: "AffineSubspace") -> int | None:
        """dim(A intersect B), or None when the intersection is empty."""
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        pivots = _build_pivots(self._cols + other._cols)
        if _reduce(pivots, self.shift.bits ^ other.shift.bits):
            return None
        return self.dim + other.dim - len(pivots)

    def __repr__(self) -> str:
        return f"AffineSubspace(n={self.n}, dim={self.dim})"
