"""Statevector backend: gate definitions, Born distributions, unitaries, and
the operator-norm vs total-variation comparison."""

import math
import random

import numpy as np
import pytest

from borncraft.circuit import (
    Circuit,
    Gate,
    T_NOISE_RATE,
    parity_circuit,
    random_circuit,
    route_nearest_neighbor,
)
from borncraft.gf2 import BitVec
from borncraft.statevector import (
    DenseDist,
    circuit_unitary,
    opnorm_tv_check,
    run_state,
    sv_distribution,
)


def test_empty_circuit_is_point_mass():
    dd = sv_distribution(Circuit(3))
    assert dd.prob(BitVec.zeros(3)) == 1.0
    assert dd.probs.sum() == pytest.approx(1.0, abs=1e-12)


def test_single_h():
    dd = sv_distribution(Circuit(1, [Gate.h(0)]))
    assert np.allclose(dd.probs, [0.5, 0.5], atol=1e-12)


def test_gate_matrices_via_unitary():
    u_t = circuit_unitary(Circuit(1, [Gate.t(0)]))
    assert np.allclose(u_t, np.diag([1, np.exp(1j * np.pi / 4)]), atol=1e-12)
    u_h = circuit_unitary(Circuit(1, [Gate.h(0)]))
    assert np.allclose(u_h, np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-12)
    u_s = circuit_unitary(Circuit(1, [Gate.s(0)]))
    assert np.allclose(u_s, np.diag([1, 1j]), atol=1e-12)


def test_cnot_truth_table():
    # index bit q is qubit q; CNOT(0,1) flips qubit 1 when qubit 0 is set
    u = circuit_unitary(Circuit(2, [Gate.cnot(0, 1)]))
    perm = {0: 0, 1: 3, 2: 2, 3: 1}
    expected = np.zeros((4, 4))
    for src, dst in perm.items():
        expected[dst, src] = 1
    assert np.allclose(u, expected, atol=1e-12)


def test_swap_truth_table():
    u = circuit_unitary(Circuit(2, [Gate.swap(0, 1)]))
    perm = {0: 0, 1: 2, 2: 1, 3: 3}
    expected = np.zeros((4, 4))
    for src, dst in perm.items():
        expected[dst, src] = 1
    assert np.allclose(u, expected, atol=1e-12)


def test_unitarity_random_circuits():
    rng = random.Random(77)
    for _ in range(100):
        n = rng.randrange(1, 7)
        c = random_circuit(rng, n, rng.randrange(0, 10), allow_t=True)
        u = circuit_unitary(c)
        assert np.allclose(u.conj().T @ u, np.eye(1 << n), atol=1e-10)


def test_single_t_gadget_flip_probability():
    # The H.T.H gadget flips a basis state with probability sin^2(pi/8);
    # this anchors the noise rate used throughout.
    u = circuit_unitary(Circuit(1, [Gate.h(0), Gate.t(0), Gate.h(0)]))
    flip = abs(u[1, 0]) ** 2
    assert flip == pytest.approx(math.sin(math.pi / 8) ** 2, abs=1e-12)
    assert abs(u[0, 1]) ** 2 == pytest.approx(T_NOISE_RATE, abs=1e-12)
    assert T_NOISE_RATE == pytest.approx(0.146, abs=5e-4)


def test_parity_circuit_noiseless_support():
    s = BitVec.from_str("101")
    dd = sv_distribution(parity_circuit(s, noisy=False))
    for idx in range(16):
        x = BitVec(4, idx)
        expected = 0.125 if x[3] == (x[0] ^ x[2]) else 0.0
        assert dd.prob(x) == pytest.approx(expected, abs=1e-12)


def test_parity_circuit_noisy_probabilities():
    dd = sv_distribution(parity_circuit(BitVec.from_str("11"), noisy=True))
    good = (1 - T_NOISE_RATE) / 4
    bad = T_NOISE_RATE / 4
    for idx in range(8):
        x = BitVec(3, idx)
        expected = good if x[2] == (x[0] ^ x[1]) else bad
        assert dd.prob(x) == pytest.approx(expected, abs=1e-12)
    assert good == pytest.approx(0.21339, abs=5e-6)
    assert bad == pytest.approx(0.03661, abs=5e-6)


def test_parity_circuit_padding_stays_zero():
    dd = sv_distribution(parity_circuit(BitVec.from_str("10"), noisy=True, pad=2))
    for idx in range(1 << 5):
        x = BitVec(5, idx)
        if x[3] or x[4]:
            assert dd.prob(x) == 0.0


def test_opnorm_identical_circuits():
    c = parity_circuit(BitVec.from_str("11"), noisy=True)
    opnorm, tvd = opnorm_tv_check(c, c)
    assert opnorm == 0.0 and tvd == 0.0


def test_opnorm_t_vs_empty():
    opnorm, tvd = opnorm_tv_check(Circuit(1, [Gate.t(0)]), Circuit(1))
    assert opnorm == pytest.approx(2 * math.sin(math.pi / 8), abs=1e-12)
    assert opnorm == pytest.approx(abs(np.exp(1j * np.pi / 4) - 1), abs=1e-12)
    assert tvd == 0.0


def test_tv_never_exceeds_opnorm():
    rng = random.Random(55)
    for _ in range(100):
        n = rng.randrange(1, 7)
        base = random_circuit(rng, n, rng.randrange(1, 8), allow_t=True)
        gates = list(base.gates())
        kinds = ["H", "S", "T"]
        extra = Gate(kinds[rng.randrange(3)], (rng.randrange(n),))
        perturbed = Circuit(n, gates + [extra])
        opnorm, tvd = opnorm_tv_check(base, perturbed)
        assert tvd <= opnorm


def test_routing_preserves_distribution():
    rng = random.Random(66)
    for _ in range(50):
        n = rng.randrange(2, 9)
        c = random_circuit(rng, n, rng.randrange(1, 10), allow_t=True)
        # widen a couple of gates to force actual routing work
        gates = list(c.gates())
        if n > 2:
            a, b = 0, n - 1
            gates.append(Gate.cnot(a, b))
        c2 = Circuit(n, gates)
        routed = route_nearest_neighbor(c2)
        assert routed.is_nearest_neighbor()
        p = sv_distribution(c2).probs
        q = sv_distribution(routed).probs
        assert 0.5 * np.abs(p - q).sum() < 1e-10


def test_dense_dist_validation_and_sampling():
    with pytest.raises(ValueError):
        DenseDist(1, np.array([0.6, 0.6]))
    with pytest.raises(ValueError):
        DenseDist(1, np.array([-0.2, 1.2]))
    dd = DenseDist(2, np.array([0.5, 0.5, 0.0, 0.0]))
    rng = random.Random(1)
    draws = [dd.sample(rng).bits for _ in range(2000)]
    assert set(draws) <= {0, 1}
    assert 800 < sum(1 for d in draws if d == 0) < 1200


def test_qubit_guards():
    with pytest.raises(ValueError, match="limited"):
        sv_distribution(Circuit(21))
    with pytest.raises(ValueError, match="limited"):
        circuit_unitary(Circuit(11))


def test_run_state_normalized():
    rng = random.Random(2)
    for _ in range(20):
        c = random_circuit(rng, rng.randrange(1, 6), rng.randrange(0, 8), allow_t=True)
        sv = run_state(c)
        assert np.linalg.norm(sv.amplitudes) == pytest.approx(1.0, abs=1e-10)
