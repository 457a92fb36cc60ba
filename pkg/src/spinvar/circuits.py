"""Parameterized circuits: gate list representation, ansatz builders,
depth accounting, and (optionally noisy) execution on a statevector.

A gate angle is either a constant or multiplier * theta[param_slot]; a
circuit's slots 0..n_params-1 must all be referenced by some gate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import Observable, PauliString
from .statevector import (
    HADAMARD,
    NoiseConfig,
    StateVector,
    _apply_1q_amps,
    apply_cx,
    apply_pauli_rotation,
    rx_matrix,
    ry_matrix,
    rz_matrix,
    u3_matrix,
)

ROTATION_KINDS = ("RX", "RY", "RZ")
GATE_KINDS = ROTATION_KINDS + ("H", "U3", "CX", "PAULI_ROT")


@dataclass(frozen=True)
class Gate:
    """One circuit operation.

    Parameterized gates (RX/RY/RZ/PAULI_ROT) carry either a param_slot
    with a multiplier or a constant angle, never both. H and CX take no
    angle; U3 takes three constant Euler angles.
    """

    kind: str
    qubits: tuple[int, ...]
    param_slot: int | None = None
    multiplier: float = 1.0
    angle: float | None = None
    pauli: PauliString | None = None
    u3_angles: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == "CX":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError("CX needs two distinct qubits")
        elif self.kind == "PAULI_ROT":
            if self.pauli is None or self.pauli.is_identity:
                raise ValueError("PAULI_ROT needs a non-identity Pauli string")
        elif len(self.qubits) != 1:
            raise ValueError(f"{self.kind} acts on exactly one qubit")
        if self.kind in ROTATION_KINDS or self.kind == "PAULI_ROT":
            if (self.param_slot is None) == (self.angle is None):
                raise ValueError(f"{self.kind} needs a param_slot or a constant angle, not both")
        elif self.param_slot is not None or self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")
        if self.kind == "U3" and self.u3_angles is None:
            raise ValueError("U3 needs three Euler angles")

    @property
    def touched_qubits(self) -> tuple[int, ...]:
        """Qubits the gate acts on (a Pauli rotation's support)."""
        if self.kind == "PAULI_ROT":
            mask = self.pauli.x_mask | self.pauli.z_mask
            return tuple(q for q in range(self.pauli.n_qubits) if (mask >> q) & 1)
        return self.qubits

    def bound_angle(self, theta: np.ndarray) -> float:
        if self.param_slot is not None:
            return self.multiplier * float(theta[self.param_slot])
        return self.angle


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]
    n_params: int

    def __post_init__(self):
        used = set()
        for g in self.gates:
            for q in g.touched_qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"gate {g.kind} touches qubit {q}, out of range")
            if g.param_slot is not None:
                if not 0 <= g.param_slot < self.n_params:
                    raise ValueError(f"param slot {g.param_slot} out of range")
                used.add(g.param_slot)
        if used != set(range(self.n_params)):
            missing = sorted(set(range(self.n_params)) - used)
            raise ValueError(f"unused parameter slots: {missing}")

    def slot_gates(self) -> list[list[Gate]]:
        """Gates fed by each parameter slot, in circuit order."""
        table: list[list[Gate]] = [[] for _ in range(self.n_params)]
        for g in self.gates:
            if g.param_slot is not None:
                table[g.param_slot].append(g)
        return table


def bind_check(circuit: Circuit, theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (circuit.n_params,):
        raise ValueError(
            f"parameter vector of length {theta.shape} does not bind {circuit.n_params} slots"
        )
    if not np.all(np.isfinite(theta)):
        raise ValueError("non-finite parameter value")
    return theta


def build_efficient_su2(n_qubits: int, reps: int) -> Circuit:
    """Hardware-efficient ansatz: RY+RZ rotation blocks with linear CX chains.

    reps+1 rotation blocks interleaved with reps entanglement blocks;
    n_params = 2 * n_qubits * (reps + 1).
    """
    if n_qubits < 2:
        raise ValueError("need at least 2 qubits")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    gates = []
    slot = 0
    for block in range(reps + 1):
        for kind in ("RY", "RZ"):
            for q in range(n_qubits):
                gates.append(Gate(kind, (q,), param_slot=slot))
                slot += 1
        if block < reps:
            for q in range(n_qubits - 1):
                gates.append(Gate("CX", (q, q + 1)))
    return Circuit(n_qubits, tuple(gates), slot)


def build_qaoa_ansatz(h: Observable, p: int) -> Circuit:
    """Alternating cost/mixer ansatz for the given cost Hamiltonian.

    Uniform-superposition init, then p repetitions of {per-term Pauli
    rotation with angle 2*coeff*gamma_j} and {RX(2*beta_j) on every
    qubit}. Slots are ordered gamma_1, beta_1, ..., gamma_p, beta_p.
    Identity terms are constant shifts and produce no gate.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    cost_terms = [t for t in h.terms if not t.string.is_identity]
    if not cost_terms:
        raise ValueError("cost Hamiltonian has no non-identity terms")
    n = h.n_qubits
    gates = [Gate("H", (q,)) for q in range(n)]
    for j in range(p):
        gamma, beta = 2 * j, 2 * j + 1
        for term in cost_terms:
            gates.append(
                Gate("PAULI_ROT", (), param_slot=gamma, multiplier=2.0 * term.coefficient,
                     pauli=term.string)
            )
        for q in range(n):
            gates.append(Gate("RX", (q,), param_slot=beta, multiplier=2.0))
    return Circuit(n, tuple(gates), 2 * p)


def build_pauli_cluster_ansatz(strings: list[PauliString], reps: int) -> Circuit:
    """One independently parameterized rotation per string, repeated reps times."""
    if not strings:
        raise ValueError("empty string list")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    n = strings[0].n_qubits
    for s in strings:
        if s.is_identity:
            raise ValueError("identity string in cluster ansatz")
        if s.n_qubits != n:
            raise ValueError("strings disagree on qubit count")
    gates = []
    slot = 0
    for _ in range(reps):
        for s in strings:
            gates.append(Gate("PAULI_ROT", (), param_slot=slot, pauli=s))
            slot += 1
    return Circuit(n, tuple(gates), slot)


def circuit_depth(circuit: Circuit) -> int:
    """Greedy as-soon-as-possible layering depth."""
    frontier = [0] * circuit.n_qubits
    depth = 0
    for g in circuit.gates:
        qubits = g.touched_qubits
        layer = 1 + max(frontier[q] for q in qubits)
        for q in qubits:
            frontier[q] = layer
        depth = max(depth, layer)
    return depth


def _noise_prob(gate: Gate, noise: NoiseConfig) -> float:
    return noise.p1 if len(gate.touched_qubits) == 1 else noise.p2


def noise_sites(circuit: Circuit, noise: NoiseConfig) -> tuple[np.ndarray, np.ndarray]:
    """Per-gate misfire probabilities and Pauli-code caps (4^k per gate).

    Callers that draw many trajectories from one circuit should compute
    this once and hand it to draw_noise_events.
    """
    n_gates = len(circuit.gates)
    probs = np.fromiter(
        (_noise_prob(g, noise) for g in circuit.gates), dtype=float, count=n_gates
    )
    caps = np.fromiter(
        (4 ** len(g.touched_qubits) for g in circuit.gates), dtype=np.int64, count=n_gates
    )
    return probs, caps


def draw_noise_events(
    circuit: Circuit,
    noise: NoiseConfig,
    rng: np.random.Generator,
    sites: tuple[np.ndarray, np.ndarray] | None = None,
) -> tuple[tuple[int, int], ...]:
    """Decide which gates misfire in one trajectory.

    Returns (gate_index, code) pairs; code in [1, 4^k) encodes a
    non-identity Pauli on the gate's k touched qubits, base-4 digit per
    qubit (0=I, 1=X, 2=Y, 3=Z).
    """
    probs, caps = noise_sites(circuit, noise) if sites is None else sites
    fired = np.nonzero(rng.random(len(probs)) < probs)[0]
    return tuple((int(i), int(rng.integers(1, caps[i]))) for i in fired)


def _error_string(n_qubits: int, qubits: tuple[int, ...], code: int) -> PauliString:
    x_mask = z_mask = 0
    for q in qubits:
        digit = code % 4
        code //= 4
        if digit == 1:
            x_mask |= 1 << q
        elif digit == 2:
            x_mask |= 1 << q
            z_mask |= 1 << q
        elif digit == 3:
            z_mask |= 1 << q
    return PauliString(n_qubits, x_mask, z_mask)


def apply_gate(gate: Gate, state: StateVector, theta: np.ndarray) -> None:
    """Apply one gate in place; theta must already be validated."""
    n = state.n_qubits
    kind = gate.kind
    if kind == "PAULI_ROT":
        apply_pauli_rotation(state, gate.pauli, gate.bound_angle(theta))
    elif kind == "CX":
        apply_cx(state, gate.qubits[0], gate.qubits[1])
    elif kind == "H":
        _apply_1q_amps(state.amplitudes, HADAMARD, gate.qubits[0], n)
    elif kind == "U3":
        _apply_1q_amps(state.amplitudes, u3_matrix(*gate.u3_angles), gate.qubits[0], n)
    else:
        matrix = {"RX": rx_matrix, "RY": ry_matrix, "RZ": rz_matrix}[kind]
        _apply_1q_amps(state.amplitudes, matrix(gate.bound_angle(theta)), gate.qubits[0], n)


def execute_with_noise_events(
    circuit: Circuit,
    theta: np.ndarray,
    state: StateVector,
    events: tuple[tuple[int, int], ...] = (),
) -> StateVector:
    """Run the circuit in place, inserting the given Pauli errors after
    their gates. An empty event list is a noiseless run."""
    theta = bind_check(circuit, theta)
    if state.n_qubits != circuit.n_qubits:
        raise ValueError("state and circuit disagree on qubit count")
    errors = dict(events)
    n = circuit.n_qubits
    for i, g in enumerate(circuit.gates):
        apply_gate(g, state, theta)
        code = errors.get(i)
        if code is not None:
            err = _error_string(n, g.touched_qubits, code)
            state.amplitudes = err.apply_amplitudes(state.amplitudes)
    return state


def run_circuit(
    circuit: Circuit,
    theta: np.ndarray,
    state: StateVector,
    noise: NoiseConfig | None = None,
    rng: np.random.Generator | None = None,
) -> StateVector:
    """Execute the bound circuit on the given state, in place.

    With noise enabled this realizes a single stochastic trajectory:
    after each gate, with probability p1 (one-qubit) or p2 (multi-qubit)
    a uniformly random non-identity Pauli on the touched qubits fires.
    """
    events: tuple[tuple[int, int], ...] = ()
    if noise is not None and noise.enabled:
        if rng is None:
            raise ValueError("noisy execution needs an rng")
        events = draw_noise_events(circuit, noise, rng)
    return execute_with_noise_events(circuit, theta, state, events)


def dump_circuit(circuit: Circuit) -> str:
    """One line per gate: kind, comma-joined qubits, slot, multiplier.

    Constant-angle gates show '-' for the slot and the angle in the
    multiplier column; U3 shows its three angles.
    """
    lines = []
    for g in circuit.gates:
        kind = f"PAULI_ROT({g.pauli.label})" if g.kind == "PAULI_ROT" else g.kind
        qubits = ",".join(map(str, g.touched_qubits))
        if g.param_slot is not None:
            lines.append(f"{kind} {qubits} {g.param_slot} {g.multiplier!r}")
        elif g.kind == "U3":
            angles = ",".join(repr(a) for a in g.u3_angles)
            lines.append(f"{kind} {qubits} - {angles}")
        elif g.angle is not None:
            lines.append(f"{kind} {qubits} - {g.angle!r}")
        else:
            lines.append(f"{kind} {qubits} - -")
    return "\n".join(lines) + "\n"
