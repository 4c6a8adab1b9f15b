"""Circuit IR over {H, S, CNOT, SWAP, T}: layer packing, parity-circuit builder,
SWAP routing onto a line, and a line-oriented text format."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .gf2 import BitVec

GATE_ARITY = {"H": 1, "S": 1, "T": 1, "CNOT": 2, "SWAP": 2}

# Flip probability of the single-T gadget H.T.H acting on a basis state.
T_NOISE_RATE = math.sin(math.pi / 8) ** 2


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        arity = GATE_ARITY.get(self.kind)
        if arity is None:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubit(s)")
        if any(q < 0 for q in self.qubits):
            raise ValueError("negative qubit index")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError("two-qubit gate needs distinct qubits")

    @classmethod
    def h(cls, q: int) -> "Gate":
        return cls("H", (q,))

    @classmethod
    def s(cls, q: int) -> "Gate":
        return cls("S", (q,))

    @classmethod
    def t(cls, q: int) -> "Gate":
        return cls("T", (q,))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls("CNOT", (control, target))

    @classmethod
    def swap(cls, a: int, b: int) -> "Gate":
        return cls("SWAP", (a, b))

    def is_local(self) -> bool:
        """True for one-qubit gates and two-qubit gates on adjacent wires."""
        if len(self.qubits) == 1:
            return True
        return abs(self.qubits[0] - self.qubits[1]) == 1


def _pack(n: int, gates: Iterable[Gate]) -> tuple[tuple[Gate, ...], ...]:
    """Greedy earliest-fit packing of a gate sequence into layers."""
    layers: list[list[Gate]] = []
    avail = [0] * n
    for g in gates:
        for q in g.qubits:
            if q >= n:
                raise ValueError(f"qubit {q} out of range for {n}-qubit circuit")
        level = max(avail[q] for q in g.qubits)
        if level == len(layers):
            layers.append([])
        layers[level].append(g)
        for q in g.qubits:
            avail[q] = level + 1
    return tuple(tuple(layer) for layer in layers)


class Circuit:
    """Immutable layered circuit on n qubits (0-based wire indices)."""

    __slots__ = ("n", "layers")

    def __init__(self, n: int, gates: Iterable[Gate] = ()):
        if n < 0:
            raise ValueError("qubit count must be nonnegative")
        self.n = n
        self.layers = _pack(n, gates)

    def gates(self) -> Iterator[Gate]:
        for layer in self.layers:
            yield from layer

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates() if g.kind == kind)

    def is_nearest_neighbor(self) -> bool:
        return all(g.is_local() for g in self.gates())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Circuit)
            and self.n == other.n
            and self.layers == other.layers
        )

    def __hash__(self) -> int:
        return hash((self.n, self.layers))

    def __repr__(self) -> str:
        return f"Circuit(n={self.n}, depth={len(self.layers)}, gates={sum(len(l) for l in self.layers)})"


def depth(c: Circuit) -> int:
    """Number of nonempty layers after greedy left-packing."""
    return len(c.layers)


def parity_circuit(s: BitVec, noisy: bool, pad: int = 0) -> Circuit:
    """Circuit on len(s)+1+pad qubits whose output pairs a uniform x with the
    parity of the bits selected by s, written onto qubit len(s).

    With noisy=True the gadget H.T.H follows on the parity qubit, flipping it
    with probability sin^2(pi/8); it is the only T gate in the circuit. The
    trailing pad qubits carry no gates and stay at 0.
    """
    k = s.n
    if k < 1:
        raise ValueError("parity circuit needs at least one input bit")
    if pad < 0:
        raise ValueError("pad must be nonnegative")
    gates = [Gate.h(i) for i in range(k)]
    for i in range(k):
        if s[i]:
            gates.append(Gate.cnot(i, k))
    if noisy:
        gates += [Gate.h(k), Gate.t(k), Gate.h(k)]
    return Circuit(k + 1 + pad, gates)


def route_nearest_neighbor(c: Circuit) -> Circuit:
    """Rewrite two-qubit gates onto adjacent wires by SWAP conjugation.

    A gate at distance d becomes d-1 SWAPs, the gate, and d-1 inverse SWAPs;
    the Born distribution is unchanged. Already-local circuits are returned
    as-is.
    """
    if c.is_nearest_neighbor():
        return c
    out: list[Gate] = []
    for g in c.gates():
        if g.is_local():
            out.append(g)
            continue
        lo, hi = min(g.qubits), max(g.qubits)
        ladder = [Gate.swap(i, i + 1) for i in range(lo, hi - 1)]
        out += ladder
        remapped = tuple(hi - 1 if q == lo else q for q in g.qubits)
        out.append(Gate(g.kind, remapped))
        out += reversed(ladder)
    return Circuit(c.n, out)


def random_circuit(rng, n: int, n_layers: int, p_two: float = 0.4,
                   allow_t: bool = False) -> Circuit:
    """Random nearest-neighbor circuit with at most n_layers layers."""
    if n < 1:
        raise ValueError("need at least one qubit")
    one_q = ["H", "S", "T"] if allow_t else ["H", "S"]
    gates: list[Gate] = []
    for _ in range(n_layers):
        order = list(range(n))
        rng.shuffle(order)
        used: set[int] = set()
        for q in order:
            if q in used:
                continue
            neighbors = [p for p in (q - 1, q + 1) if 0 <= p < n and p not in used]
            if neighbors and rng.random() < p_two:
                p = neighbors[0] if len(neighbors) == 1 else neighbors[rng.getrandbits(1)]
                if rng.getrandbits(1):
                    gates.append(Gate.cnot(q, p))
                else:
                    gates.append(Gate.swap(q, p))
                used.update((q, p))
            else:
                gates.append(Gate(one_q[rng.randrange(len(one_q))], (q,)))
                used.add(q)
    return Circuit(n, gates)


def format_circuit(c: Circuit) -> str:
    """Serialize to the text interchange format (header + one gate per line)."""
    lines = [f"qubits {c.n}"]
    for g in c.gates():
        lines.append(" ".join([g.kind, *map(str, g.qubits)]))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    """Parse the text format: `qubits N` header, `H q` / `CNOT q1 q2` lines,
    `#` comments; layers are inferred by greedy packing."""
    n: int | None = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "qubits" or len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'qubits N' header")
            try:
                n = int(parts[1])
            except ValueError:
                raise ValueError(f"line {lineno}: bad qubit count {parts[1]!r}") from None
            if n < 0:
                raise ValueError(f"line {lineno}: negative qubit count")
            continue
        kind = parts[0].upper()
        arity = GATE_ARITY.get(kind)
        if arity is None:
            raise ValueError(f"line {lineno}: unknown gate {parts[0]!r}")
        if len(parts) != 1 + arity:
            raise ValueError(f"line {lineno}: {kind} takes {arity} qubit(s)")
        try:
            qubits = tuple(int(p) for p in parts[1:])
        except ValueError:
            raise ValueError(f"line {lineno}: bad qubit index") from None
        try:
            gates.append(Gate(kind, qubits))
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
    if n is None:
        raise ValueError("missing 'qubits N' header")
    return Circuit(n, gates)
