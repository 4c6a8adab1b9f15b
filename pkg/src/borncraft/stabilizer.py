"""Stabilizer-tableau simulation of Clifford circuits.

The computational-basis support of any stabilized state is an affine subspace
with uniform probabilities; `support` extracts it exactly from the tableau.
"""

from __future__ import annotations

from .circuit import Circuit
from .gf2 import AffineSubspace, BitMatrix, BitVec, nullspace, solve, _lsb


def _pauli_mul(x1: int, z1: int, r1: int, x2: int, z2: int, r2: int) -> tuple[int, int, int]:
    """Multiply two signed Pauli rows (Y encoded as x=z=1); the accumulated
    i-power must come out even, which holds for any closed stabilizer group."""
    phase = 2 * (r1 + r2)
    overlap = (x1 | z1) & (x2 | z2)
    while overlap:
        q = _lsb(overlap)
        overlap &= overlap - 1
        ax, az = (x1 >> q) & 1, (z1 >> q) & 1
        bx, bz = (x2 >> q) & 1, (z2 >> q) & 1
        if ax and az:
            phase += bz - bx
        elif ax:
            phase += bz * (2 * bx - 1)
        elif az:
            phase += bx * (1 - 2 * bz)
    phase %= 4
    if phase & 1:
        raise AssertionError("odd i-power in stabilizer product")
    return x1 ^ x2, z1 ^ z2, phase >> 1


class StabTableau:
    """2n generator rows (n destabilizers then n stabilizers), bit-packed.

    Row i is the signed Pauli (-1)^rs[i] * P(xs[i], zs[i]) with the usual
    per-qubit encoding I=(0,0), X=(1,0), Y=(1,1), Z=(0,1). Mutation is
    single-owner during simulation; extracted supports are immutable.
    """

    __slots__ = ("n", "xs", "zs", "rs", "_support")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("need at least one qubit")
        self.n = n
        self.xs = [1 << i for i in range(n)] + [0] * n
        self.zs = [0] * n + [1 << i for i in range(n)]
        self.rs = [0] * (2 * n)
        self._support: AffineSubspace | None = None

    def _h(self, q: int) -> None:
        bit = 1 << q
        for i in range(2 * self.n):
            x, z = self.xs[i] & bit, self.zs[i] & bit
            if x and z:
                self.rs[i] ^= 1
            if bool(x) != bool(z):
                self.xs[i] ^= bit
                self.zs[i] ^= bit

    def _s(self, q: int) -> None:
        bit = 1 << q
        for i in range(2 * self.n):
            x = self.xs[i] & bit
            if x and (self.zs[i] & bit):
                self.rs[i] ^= 1
            if x:
                self.zs[i] ^= bit

    def _cnot(self, control: int, target: int) -> None:
        for i in range(2 * self.n):
            xa = (self.xs[i] >> control) & 1
            zb = (self.zs[i] >> target) & 1
            if xa & zb:
                xb = (self.xs[i] >> target) & 1
                za = (self.zs[i] >> control) & 1
                self.rs[i] ^= xb ^ za ^ 1
            self.xs[i] ^= xa << target
            self.zs[i] ^= zb << control

    def _swap(self, a: int, b: int) -> None:
        for vec in (self.xs, self.zs):
            for i in range(2 * self.n):
                d = ((vec[i] >> a) ^ (vec[i] >> b)) & 1
                vec[i] ^= (d << a) | (d << b)

    def apply(self, gate) -> None:
        self._support = None
        if gate.kind == "H":
            self._h(gate.qubits[0])
        elif gate.kind == "S":
            self._s(gate.qubits[0])
        elif gate.kind == "CNOT":
            self._cnot(gate.qubits[0], gate.qubits[1])
        elif gate.kind == "SWAP":
            self._swap(gate.qubits[0], gate.qubits[1])
        else:
            raise ValueError(f"non-Clifford gate {gate.kind} cannot be applied to a tableau")

    def _commutes(self, i: int, j: int) -> bool:
        sym = (self.xs[i] & self.zs[j]).bit_count() + (self.zs[i] & self.xs[j]).bit_count()
        return sym % 2 == 0

    def validate(self) -> None:
        """Check the tableau group structure; raises on violation."""
        n = self.n
        for i in range(n, 2 * n):
            for j in range(i + 1, 2 * n):
                if not self._commutes(i, j):
                    raise AssertionError(f"stabilizer rows {i - n},{j - n} anticommute")
        for i in range(n):
            for j in range(n, 2 * n):
                expect = j - n == i
                if self._commutes(i, j) == expect:
                    raise AssertionError(f"destabilizer {i} pairing broken at {j - n}")
        rows = [self.xs[i] | (self.zs[i] << n) for i in range(2 * n)]
        m = BitMatrix(2 * n, 2 * n, rows)
        from .gf2 import rank

        if rank(m) != 2 * n:
            raise AssertionError("tableau rows are not full rank")

    def support(self) -> AffineSubspace:
        """Affine subspace A with Born probability 2^-dim(A) on A, 0 elsewhere.

        Z-only elements of the stabilizer group pin affine constraints
        <z, x> = sign bit; the constraint system's solution set is A.
        """
        if self._support is not None:
            return self._support
        n = self.n
        stab_x = self.xs[n:]
        stab_z = self.zs[n:]
        stab_r = self.rs[n:]
        x_combos = BitMatrix(n, n, stab_x).transpose()
        constraints: list[int] = []
        rhs = 0
        for combo in nullspace(x_combos):
            x, z, r = 0, 0, 0
            sel = combo.bits
            while sel:
                i = _lsb(sel)
                sel &= sel - 1
                x, z, r = _pauli_mul(x, z, r, stab_x[i], stab_z[i], stab_r[i])
            if x:
                raise AssertionError("kernel combination has a residual X part")
            rhs |= r << len(constraints)
            constraints.append(z)
        cmat = BitMatrix(len(constraints), n, constraints)
        shift = solve(cmat, BitVec(len(constraints), rhs))
        if shift is None:
            raise AssertionError("inconsistent support constraints")
        basis = nullspace(cmat)
        self._support = AffineSubspace(BitMatrix.from_cols(basis, rows=n), shift)
        return self._support

    def sample(self, rng) -> BitVec:
        """One computational-basis sample, uniform on the support."""
        return self.support().sample(rng)


def simulate_clifford(c: Circuit) -> StabTableau:
    """Tableau stabilizing the circuit output state; rejects T gates."""
    for g in c.gates():
        if g.kind == "T":
            raise ValueError("non-Clifford gate T in circuit; use the statevector backend")
    tab = StabTableau(c.n)
    for g in c.gates():
        tab.apply(g)
    return tab


def support(tab: StabTableau) -> AffineSubspace:
    return tab.support()
