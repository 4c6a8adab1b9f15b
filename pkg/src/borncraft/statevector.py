"""Dense statevector simulation for small circuits, including T gates.

Ground-truth backend: exact Born distributions, full circuit unitaries, and
the operator-norm / total-variation comparison of two circuits. Basis index
convention: bit q of the integer index is the state of qubit q.
"""

from __future__ import annotations

import bisect

import numpy as np

from .circuit import Circuit
from .gf2 import BitVec

MAX_STATE_QUBITS = 20
MAX_UNITARY_QUBITS = 10

_NORM_TOL = 1e-10

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)
_T = np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex)
_1Q = {"H": _H, "S": _S, "T": _T}


def _apply_1q(arr: np.ndarray, mat: np.ndarray, q: int, n: int) -> np.ndarray:
    # Leading n axes are qubit axes (axis a holds qubit n-1-a); trailing axes
    # pass through, so the same kernels serve states and unitaries.
    axis = n - 1 - q
    out = np.tensordot(mat, arr, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _index(ndim: int, assignments: dict[int, int]) -> tuple:
    idx: list = [slice(None)] * ndim
    for axis, v in assignments.items():
        idx[axis] = v
    return tuple(idx)


def _apply_cnot(arr: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    ac, at = n - 1 - control, n - 1 - target
    out = arr.copy()
    out[_index(arr.ndim, {ac: 1, at: 0})] = arr[_index(arr.ndim, {ac: 1, at: 1})]
    out[_index(arr.ndim, {ac: 1, at: 1})] = arr[_index(arr.ndim, {ac: 1, at: 0})]
    return out


def _apply_swap(arr: np.ndarray, a: int, b: int, n: int) -> np.ndarray:
    aa, ab = n - 1 - a, n - 1 - b
    out = arr.copy()
    out[_index(arr.ndim, {aa: 0, ab: 1})] = arr[_index(arr.ndim, {aa: 1, ab: 0})]
    out[_index(arr.ndim, {aa: 1, ab: 0})] = arr[_index(arr.ndim, {aa: 0, ab: 1})]
    return out


def _apply_gate(arr: np.ndarray, gate, n: int) -> np.ndarray:
    if gate.kind in _1Q:
        return _apply_1q(arr, _1Q[gate.kind], gate.qubits[0], n)
    if gate.kind == "CNOT":
        return _apply_cnot(arr, gate.qubits[0], gate.qubits[1], n)
    return _apply_swap(arr, gate.qubits[0], gate.qubits[1], n)


class StateVector:
    """2^n complex amplitudes of an n-qubit pure state."""

    __slots__ = ("n", "amplitudes")

    def __init__(self, n: int, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (1 << n,):
            raise ValueError("amplitude count must be 2^n")
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm {norm} drifted beyond tolerance")
        self.n = n
        self.amplitudes = amplitudes

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


class DenseDist:
    """Explicit probability table over {0,1}^n."""

    __slots__ = ("n", "probs", "_cum")

    def __init__(self, n: int, probs: np.ndarray):
        probs = np.asarray(probs, dtype=float)
        if probs.shape != (1 << n,):
            raise ValueError("probability count must be 2^n")
        if probs.min() < -1e-12:
            raise ValueError("negative probability")
        if abs(probs.sum() - 1.0) > _NORM_TOL:
            raise ValueError("probabilities do not sum to 1")
        self.n = n
        self.probs = np.clip(probs, 0.0, None)
        self._cum: list[float] | None = None

    def prob(self, x: BitVec) -> float:
        if x.n != self.n:
            raise ValueError("length mismatch")
        return float(self.probs[x.bits])

    def sample(self, rng) -> BitVec:
        if self._cum is None:
            self._cum = list(np.cumsum(self.probs))
        idx = bisect.bisect_right(self._cum, rng.random())
        return BitVec(self.n, min(idx, (1 << self.n) - 1))


def run_state(c: Circuit) -> StateVector:
    """Apply the circuit to |0...0>, checking norm after every layer."""
    if c.n > MAX_STATE_QUBITS:
        raise ValueError(f"statevector backend limited to {MAX_STATE_QUBITS} qubits")
    state = np.zeros(1 << c.n, dtype=complex)
    state[0] = 1.0
    arr = state.reshape((2,) * c.n) if c.n else state
    for layer in c.layers:
        for gate in layer:
            arr = _apply_gate(arr, gate, c.n)
        norm = np.linalg.norm(arr)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"norm drifted to {norm} during simulation")
    return StateVector(c.n, arr.reshape(-1))


def sv_distribution(c: Circuit) -> DenseDist:
    """Exact Born distribution of the circuit output."""
    return DenseDist(c.n, run_state(c).probabilities())


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Full 2^n x 2^n unitary; column k is the circuit applied to basis state k."""
    if c.n > MAX_UNITARY_QUBITS:
        raise ValueError(f"unitary construction limited to {MAX_UNITARY_QUBITS} qubits")
    dim = 1 << c.n
    arr = np.eye(dim, dtype=complex).reshape((2,) * c.n + (dim,))
    for gate in c.gates():
        arr = _apply_gate(arr, gate, c.n)
    return arr.reshape(dim, dim)


def opnorm_tv_check(c1: Circuit, c2: Circuit) -> tuple[float, float]:
    """(largest singular value of U1-U2, TV of the two Born distributions).

    The TV never exceeds the operator norm; both are raw, with no global-phase
    alignment.
    """
    if c1.n != c2.n:
        raise ValueError("circuits act on different qubit counts")
    u = circuit_unitary(c1)
    w = circuit_unitary(c2)
    opnorm = float(np.linalg.norm(u - w, 2))
    p = sv_distribution(c1).probs
    q = sv_distribution(c2).probs
    tv = float(0.5 * np.abs(p - q).sum())
    return opnorm, tv
