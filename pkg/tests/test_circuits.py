"""Circuit builders, depth metric, and noisy execution."""

import numpy as np
import pytest
from scipy.linalg import expm

from spinvar.circuits import (
    Circuit,
    Gate,
    bind_check,
    build_efficient_su2,
    build_pauli_cluster_ansatz,
    build_qaoa_ansatz,
    circuit_depth,
    draw_noise_events,
    dump_circuit,
    execute_with_noise_events,
    noise_sites,
    run_circuit,
)
from spinvar.problems import MgmParams, build_mgm
from spinvar.pauli import pauli_from_label
from spinvar.statevector import NoiseConfig, init_zero

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}


def dense_string(label):
    out = np.eye(1, dtype=complex)
    for ch in label:
        out = np.kron(SINGLE[ch], out)
    return out


def embed(u, qubit, n):
    full = np.eye(1, dtype=complex)
    for q in range(n):
        full = np.kron(u if q == qubit else I2, full)
    return full


def dense_cx(control, target, n):
    dim = 2**n
    m = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        m[j ^ (((j >> control) & 1) << target), j] = 1.0
    return m


def gate_matrix(gate, theta, n):
    if gate.kind == "PAULI_ROT":
        return expm(-0.5j * gate.bound_angle(theta) * dense_string(gate.pauli.label))
    if gate.kind == "CX":
        return dense_cx(gate.qubits[0], gate.qubits[1], n)
    if gate.kind == "H":
        return embed(H, gate.qubits[0], n)
    angle = gate.bound_angle(theta)
    local = expm(-0.5j * angle * {"RX": X, "RY": Y, "RZ": Z}[gate.kind])
    return embed(local, gate.qubits[0], n)


def circuit_matrix(circuit, theta):
    dim = 2**circuit.n_qubits
    total = np.eye(dim, dtype=complex)
    for g in circuit.gates:
        total = gate_matrix(g, theta, circuit.n_qubits) @ total
    return total


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("CX", (1, 1))
    with pytest.raises(ValueError):
        Gate("RY", (0,))  # neither slot nor constant angle
    with pytest.raises(ValueError):
        Gate("RY", (0,), param_slot=0, angle=0.5)
    with pytest.raises(ValueError):
        Gate("H", (0,), angle=0.1)
    with pytest.raises(ValueError):
        Gate("PAULI_ROT", (), param_slot=0, pauli=pauli_from_label("II"))


def test_circuit_checks_slots_and_qubits():
    with pytest.raises(ValueError):
        Circuit(2, (Gate("RY", (0,), param_slot=0),), 2)  # slot 1 unused
    with pytest.raises(ValueError):
        Circuit(1, (Gate("CX", (0, 1)),), 0)


def test_bind_check_rejects_bad_theta():
    c = build_efficient_su2(2, 1)
    with pytest.raises(ValueError):
        bind_check(c, np.zeros(c.n_params - 1))
    with pytest.raises(ValueError):
        bind_check(c, np.full(c.n_params, np.nan))


def test_su2_parameter_count_table():
    # 2 n (r + 1) parameters; the n=15 column used for sizing runs
    for reps, expected in zip(range(1, 6), (60, 90, 120, 150, 180)):
        assert build_efficient_su2(15, reps).n_params == expected


def test_qaoa_parameter_count_table():
    h = build_mgm(MgmParams(15))
    for p, expected in zip(range(1, 6), (2, 4, 6, 8, 10)):
        assert build_qaoa_ansatz(h, p).n_params == expected


def test_su2_depth_progression():
    # regression values for the as-soon-as-possible layering at n=15
    depths = [circuit_depth(build_efficient_su2(15, r)) for r in range(1, 6)]
    assert depths == [18, 22, 26, 30, 34]


def test_qaoa_much_deeper_than_su2():
    h = build_mgm(MgmParams(15))
    for k in range(2, 6):
        qaoa = circuit_depth(build_qaoa_ansatz(h, k))
        su2 = circuit_depth(build_efficient_su2(15, k))
        assert qaoa >= 5 * su2
    # depth grows linearly in p, so one level is the only sub-5x row
    assert circuit_depth(build_qaoa_ansatz(h, 1)) >= 3 * circuit_depth(
        build_efficient_su2(15, 1)
    )


def test_su2_structure():
    c = build_efficient_su2(3, 2)
    kinds = [g.kind for g in c.gates]
    assert kinds[:6] == ["RY"] * 3 + ["RZ"] * 3
    assert kinds[6:8] == ["CX"] * 2
    assert c.n_params == 18
    slots = [g.param_slot for g in c.gates if g.param_slot is not None]
    assert slots == list(range(18))


def test_qaoa_structure():
    h = build_mgm(MgmParams(4))
    c = build_qaoa_ansatz(h, 2)
    assert [g.kind for g in c.gates[:4]] == ["H"] * 4
    rotations = [g for g in c.gates if g.kind == "PAULI_ROT"]
    assert len(rotations) == 2 * h.num_terms
    # cost rotations carry 2 * coefficient so exp(-i gamma H_C) comes out right
    assert rotations[0].multiplier == pytest.approx(2 * h.terms[0].coefficient)
    mixers = [g for g in c.gates if g.kind == "RX"]
    assert len(mixers) == 8 and all(g.multiplier == 2.0 for g in mixers)


def test_qaoa_matches_dense_evolution():
    h = build_mgm(MgmParams(4))
    c = build_qaoa_ansatz(h, 1)
    theta = np.array([0.43, -0.17])
    got = run_circuit(c, theta, init_zero(4)).amplitudes
    want = circuit_matrix(c, theta) @ init_zero(4).amplitudes
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_su2_matches_dense_evolution():
    c = build_efficient_su2(3, 2)
    rng = np.random.default_rng(0)
    theta = rng.uniform(-np.pi, np.pi, c.n_params)
    got = run_circuit(c, theta, init_zero(3)).amplitudes
    want = circuit_matrix(c, theta) @ init_zero(3).amplitudes
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_cluster_ansatz_counts():
    strings = [pauli_from_label("XXI"), pauli_from_label("IZZ")]
    c = build_pauli_cluster_ansatz(strings, 3)
    assert c.n_params == 6
    assert all(g.kind == "PAULI_ROT" for g in c.gates)
    with pytest.raises(ValueError):
        build_pauli_cluster_ansatz([pauli_from_label("II")], 1)


def test_depth_hand_cases():
    c = Circuit(3, (Gate("H", (0,)), Gate("H", (1,)), Gate("H", (2,))), 0)
    assert circuit_depth(c) == 1
    chain = Circuit(2, (Gate("CX", (0, 1)), Gate("CX", (0, 1)), Gate("CX", (1, 0))), 0)
    assert circuit_depth(chain) == 3


def test_noise_sites_shapes():
    c = build_efficient_su2(3, 1)
    probs, caps = noise_sites(c, NoiseConfig(p1=0.01, p2=0.05))
    assert len(probs) == len(c.gates)
    for g, p, cap in zip(c.gates, probs, caps):
        if g.kind == "CX":
            assert p == 0.05 and cap == 16
        else:
            assert p == 0.01 and cap == 4


def test_draw_noise_events_deterministic_and_rate():
    c = build_efficient_su2(3, 2)
    noise = NoiseConfig(p1=0.05, p2=0.2)
    a = draw_noise_events(c, noise, np.random.default_rng(5))
    b = draw_noise_events(c, noise, np.random.default_rng(5))
    assert a == b
    probs, caps = noise_sites(c, noise)
    rng = np.random.default_rng(0)
    total = sum(len(draw_noise_events(c, noise, rng)) for _ in range(4000))
    assert total / 4000 == pytest.approx(probs.sum(), rel=0.1)
    for idx, code in a:
        assert 1 <= code < caps[idx]


def test_forced_event_equals_manual_pauli_insertion():
    c = build_efficient_su2(2, 1)
    rng = np.random.default_rng(2)
    theta = rng.uniform(-np.pi, np.pi, c.n_params)
    # inject an X error (code 1) after gate 3, a one-qubit rotation
    got = execute_with_noise_events(c, theta, init_zero(2), ((3, 1),)).amplitudes
    state = init_zero(2)
    for i, g in enumerate(c.gates):
        state.amplitudes = gate_matrix(g, theta, 2) @ state.amplitudes
        if i == 3:
            err = embed(X, g.qubits[0], 2)
            state.amplitudes = err @ state.amplitudes
    np.testing.assert_allclose(got, state.amplitudes, atol=1e-12)


def test_run_circuit_noisy_needs_rng():
    c = build_efficient_su2(2, 1)
    with pytest.raises(ValueError):
        run_circuit(c, np.zeros(c.n_params), init_zero(2), noise=NoiseConfig())


def test_dump_circuit_mentions_everything():
    h = build_mgm(MgmParams(4))
    text = dump_circuit(build_qaoa_ansatz(h, 1))
    assert "PAULI_ROT(XXII)" in text
    assert "RX" in text and "H" in text
