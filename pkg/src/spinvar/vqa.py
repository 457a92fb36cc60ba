"""Algorithm drivers: VQE, QAOA, VQD, and the spectral-gap scan.

Randomness policy: every run owns a root seed; independent streams are
derived with counter-based generators keyed by purpose, so runs are
bit-reproducible and trajectories never share a stream:

    (0,)           initial parameter draw
    (1,)           optimizer perturbations
    (2, eval_idx)  parent of one evaluation's trajectories; trajectory t
                   runs on the parent bit generator jumped t times
    (3,)           final-state sampling (QAOA bitstring readout)
    (10, level)    child seeds for VQD levels >= 1

Energies are always optimized on the actual Hamiltonian; the doubled
reporting convention only rescales the reported numbers by exactly 2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._bits import bitstring

from .circuits import (
    Circuit,
    Gate,
    _error_string,
    apply_gate,
    bind_check,
    build_qaoa_ansatz,
    circuit_depth,
    draw_noise_events,
    noise_sites,
    execute_with_noise_events,
)
from .exact import lowest_eigenvalues
from .optimizers import (
    GradConfig,
    OptimizerTrace,
    QnspsaConfig,
    SpsaConfig,
    TraceRecord,
    qnspsa_minimize,
    shift_gradient_minimize,
    spsa_minimize,
)
from .pauli import Observable, PauliString, expectation, spectral_bound
from .problems import Graph, cut_value
from .statevector import (
    HADAMARD,
    S_DAGGER,
    StateVector,
    _draw_outcomes,
    estimate_expectation_sampled,
    estimate_from_outcomes,
    fidelity,
    group_probabilities,
    init_zero,
    measurement_groups,
    rx_matrix,
    ry_matrix,
    rz_matrix,
    split_shots,
    u3_matrix,
)

ROTATION_GATES = frozenset({"RX", "RY", "RZ", "PAULI_ROT"})
EXACT_ORACLE_MAX_QUBITS = 15


def rng_stream(seed: int, *key: int) -> np.random.Generator:
    """A counter-based generator for one purpose of one experiment."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


@dataclass(frozen=True)
class SimConfig:
    """How objective evaluations are simulated.

    shots=None is exact noiseless expectation. With shots set, cliques
    of the observable are sampled; with noise also enabled, the shot
    budget is spread over min(shots, max_trajectories) stochastic
    Pauli-error trajectories.
    """

    shots: int | None = None
    noise: NoiseConfig | None = None
    max_trajectories: int = 256

    def __post_init__(self):
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.noisy and self.shots is None:
            raise ValueError("noisy simulation needs a shot budget")
        if self.max_trajectories < 1:
            raise ValueError("max_trajectories must be >= 1")

    @property
    def noisy(self) -> bool:
        return self.noise is not None and self.noise.enabled

    @property
    def exact(self) -> bool:
        return self.shots is None


@dataclass(frozen=True)
class OptimizerChoice:
    """Which outer loop to run and for how long."""

    name: str
    iterations: int
    config: SpsaConfig | QnspsaConfig | GradConfig | None = None

    def __post_init__(self):
        if self.name not in ("spsa", "qnspsa", "grad"):
            raise ValueError(f"unknown optimizer {self.name!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")


def _embed_1q(matrix: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """The full 2^n unitary of a one-qubit gate (qubit = low index bit)."""
    left = np.eye(1 << (n - 1 - qubit))
    right = np.eye(1 << qubit)
    return np.kron(np.kron(left, matrix), right)


PROGRAM_MAX_QUBITS = 10

_ROTATION_LETTERS = {"RX": "X", "RY": "Y", "RZ": "Z"}
_BASIS_CACHE: dict[tuple, tuple[np.ndarray | None, np.ndarray | None]] = {}


def _gate_letters(gate: Gate) -> dict[int, str] | None:
    """Per-qubit Pauli letters of a rotation-family gate, else None."""
    if gate.kind == "PAULI_ROT":
        p = gate.pauli
        out = {}
        for q in gate.touched_qubits:
            x = (p.x_mask >> q) & 1
            z = (p.z_mask >> q) & 1
            out[q] = "XZY"[x + 2 * z - 1]
        return out
    letter = _ROTATION_LETTERS.get(gate.kind)
    if letter is None:
        return None
    return {gate.qubits[0]: letter}


def _basis_transform(n: int, letters: tuple) -> tuple[np.ndarray | None, np.ndarray | None]:
    """Local change of basis sending every letter to Z; None when already diagonal."""
    if all(letter in (None, "Z") for letter in letters):
        return None, None
    key = (n, letters)
    hit = _BASIS_CACHE.get(key)
    if hit is None:
        y_basis = HADAMARD @ S_DAGGER
        eye = np.eye(2)
        out = np.eye(1, dtype=complex)
        for q in range(n - 1, -1, -1):
            factor = {"X": HADAMARD, "Y": y_basis}.get(letters[q], eye)
            out = np.kron(out, factor)
        if len(_BASIS_CACHE) >= 16:
            _BASIS_CACHE.pop(next(iter(_BASIS_CACHE)))
        hit = (out, out.conj().T)
        _BASIS_CACHE[key] = hit
    return hit


def _compile_program(circuit: Circuit) -> list[tuple]:
    """Group maximal runs of rotation gates sharing one local basis.

    Gates inside a run commute (their strings agree letter-for-letter on
    shared qubits), so the run equals one basis change, one accumulated
    diagonal phase, and the inverse change; everything else is applied
    gate by gate.
    """
    n = circuit.n_qubits
    gates = circuit.gates
    steps: list[tuple] = []
    literal: list[Gate] = []
    sign_vecs: dict[int, np.ndarray] = {}
    i = 0
    while i < len(gates):
        if _gate_letters(gates[i]) is None:
            literal.append(gates[i])
            i += 1
            continue
        assign: list[str | None] = [None] * n
        run: list[Gate] = []
        while i < len(gates):
            letters = _gate_letters(gates[i])
            if letters is None or any(
                assign[q] not in (None, letter) for q, letter in letters.items()
            ):
                break
            for q, letter in letters.items():
                assign[q] = letter
            run.append(gates[i])
            i += 1
        if literal:
            steps.append(("lit", tuple(literal)))
            literal = []
        entries = []
        for g in run:
            if g.kind == "PAULI_ROT":
                support = g.pauli.x_mask | g.pauli.z_mask
            else:
                support = 1 << g.qubits[0]
            vec = sign_vecs.get(support)
            if vec is None:
                vec = PauliString(n, 0, support).sign_vector().astype(float)
                sign_vecs[support] = vec
            entries.append((vec, g))
        u, u_dag = _basis_transform(n, tuple(assign))
        steps.append(("run", u, u_dag, tuple(entries)))
    if literal:
        steps.append(("lit", tuple(literal)))
    return steps


def _run_program(steps: list[tuple], circuit: Circuit, theta: np.ndarray) -> StateVector:
    theta = bind_check(circuit, theta)
    state = init_zero(circuit.n_qubits)
    for step in steps:
        if step[0] == "lit":
            for g in step[1]:
                apply_gate(g, state, theta)
            continue
        _, u, u_dag, entries = step
        amps = state.amplitudes
        if u is not None:
            amps = u @ amps
        vec, g = entries[0]
        acc = g.bound_angle(theta) * vec
        for vec, g in entries[1:]:
            acc += g.bound_angle(theta) * vec
        amps = amps * np.exp(-0.5j * acc)
        if u_dag is not None:
            amps = u_dag @ amps
        state.amplitudes = amps
    return state


def _clique_rotation(x_qubits: int, y_qubits: int, n: int) -> np.ndarray:
    """Full matrix taking a clique's measurement basis to the Z basis."""
    y_basis = HADAMARD @ S_DAGGER
    out = np.eye(1, dtype=complex)
    for q in range(n - 1, -1, -1):
        bit = 1 << q
        if y_qubits & bit:
            factor = y_basis
        elif x_qubits & bit:
            factor = HADAMARD
        else:
            factor = np.eye(2)
        out = np.kron(out, factor)
    return out


class _SmallSystemEngine:
    """Trajectory sampler that trades memory for per-trajectory speed.

    On a handful of qubits, a trajectory's state is the noiseless run
    interrupted at its error sites, so precomputing prefix states and
    suffix gate products per parameter vector reduces one trajectory to
    a Pauli action and a matrix-vector product. Everything here matches
    gate-by-gate execution; only the arithmetic route differs.
    """

    TABLE_CACHE = 2
    MAX_ENTRIES = 1_000_000

    def __init__(self, circuit: Circuit, groups):
        n = circuit.n_qubits
        dim = 1 << n
        self.circuit = circuit
        self.n_qubits = n
        self.dim = dim
        self._eye = np.eye(dim, dtype=complex)
        self._const: dict[int, np.ndarray] = {}
        self._pauli_mats: dict = {}
        for i, g in enumerate(circuit.gates):
            if g.kind == "H":
                self._const[i] = _embed_1q(HADAMARD, g.qubits[0], n)
            elif g.kind == "U3":
                self._const[i] = _embed_1q(u3_matrix(*g.u3_angles), g.qubits[0], n)
            elif g.kind == "CX":
                control, target = g.qubits
                j = np.arange(dim)
                m = np.zeros((dim, dim), dtype=complex)
                m[j ^ (((j >> control) & 1) << target), j] = 1.0
                self._const[i] = m
            elif g.kind == "PAULI_ROT" and g.pauli not in self._pauli_mats:
                cols = [g.pauli.apply_amplitudes(self._eye[:, c]) for c in range(dim)]
                self._pauli_mats[g.pauli] = np.column_stack(cols)
        self.rotations = [_clique_rotation(grp.x_qubits, grp.y_qubits, n) for grp in groups]
        self._tables: dict[bytes, tuple] = {}

    @staticmethod
    def fits(circuit: Circuit) -> bool:
        dim = 1 << circuit.n_qubits
        return len(circuit.gates) * dim * dim <= _SmallSystemEngine.MAX_ENTRIES

    def tables(self, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(gate matrices, prefix states, suffix products) for one binding."""
        key = theta.tobytes()
        hit = self._tables.get(key)
        if hit is not None:
            return hit
        gates = self.circuit.gates
        n_gates = len(gates)
        dim = self.dim
        mats = np.empty((n_gates, dim, dim), dtype=complex)
        for i, g in enumerate(gates):
            const = self._const.get(i)
            if const is not None:
                mats[i] = const
            elif g.kind == "PAULI_ROT":
                half = 0.5 * g.bound_angle(theta)
                mats[i] = math.cos(half) * self._eye
                mats[i] -= (1j * math.sin(half)) * self._pauli_mats[g.pauli]
            else:
                one_q = {"RX": rx_matrix, "RY": ry_matrix, "RZ": rz_matrix}[g.kind]
                mats[i] = _embed_1q(one_q(g.bound_angle(theta)), g.qubits[0], self.n_qubits)
        prefix = np.empty((n_gates, dim), dtype=complex)
        state = self._eye[:, 0].copy()
        for i in range(n_gates):
            state = mats[i] @ state
            prefix[i] = state
        suffix = np.empty((n_gates, dim, dim), dtype=complex)
        acc = self._eye
        for i in range(n_gates - 1, -1, -1):
            suffix[i] = acc
            acc = acc @ mats[i]
        if len(self._tables) >= self.TABLE_CACHE:
            self._tables.pop(next(iter(self._tables)))
        value = (mats, prefix, suffix)
        self._tables[key] = value
        return value

    def state_probs(self, amplitudes: np.ndarray) -> list[np.ndarray]:
        return [np.abs(rot @ amplitudes) ** 2 for rot in self.rotations]

    def trajectory_probs(self, events, tables) -> list[np.ndarray]:
        mats, prefix, suffix = tables
        gates = self.circuit.gates
        first, code = events[0]
        err = _error_string(self.n_qubits, gates[first].touched_qubits, code)
        vec = err.apply_amplitudes(prefix[first])
        pos = first
        for i, code in events[1:]:
            for j in range(pos + 1, i + 1):
                vec = mats[j] @ vec
            err = _error_string(self.n_qubits, gates[i].touched_qubits, code)
            vec = err.apply_amplitudes(vec)
            pos = i
        vec = suffix[pos] @ vec
        return self.state_probs(vec)


class CircuitObjective:
    """Energy of the prepared state as a black-box objective.

    Evaluations are counted; each evaluation index owns its trajectory
    RNG streams, so re-running with the same seed replays identical
    noise. Zero-error trajectories reuse one cached noiseless state and
    its per-clique outcome distributions.
    """

    def __init__(self, observable: Observable, circuit: Circuit, sim: SimConfig, seed: int):
        if observable.n_qubits != circuit.n_qubits:
            raise ValueError("observable and circuit disagree on qubit count")
        self.observable = observable
        self.circuit = circuit
        self.sim = sim
        self.seed = seed
        self.eval_count = 0
        self._groups, self._identity = measurement_groups(observable)
        if sim.shots is not None and self._groups and sim.shots < len(self._groups):
            raise ValueError(
                f"{sim.shots} shots cannot cover {len(self._groups)} measurement cliques"
            )
        self._noise_sites = noise_sites(circuit, sim.noise) if sim.noisy else None
        self._engine = (
            _SmallSystemEngine(circuit, self._groups)
            if sim.noisy and self._groups and _SmallSystemEngine.fits(circuit)
            else None
        )
        self._program = (
            _compile_program(circuit) if circuit.n_qubits <= PROGRAM_MAX_QUBITS else None
        )
        self._state_cache: dict[bytes, StateVector] = {}

    def noiseless_state(self, theta: np.ndarray) -> StateVector:
        """Final state without any noise; memoized on recent parameter vectors."""
        theta = np.asarray(theta, dtype=float)
        key = theta.tobytes()
        hit = self._state_cache.get(key)
        if hit is None:
            if self._program is not None:
                hit = _run_program(self._program, self.circuit, theta)
            else:
                hit = execute_with_noise_events(
                    self.circuit, theta, init_zero(self.circuit.n_qubits)
                )
            if len(self._state_cache) >= 16:
                self._state_cache.pop(next(iter(self._state_cache)))
            self._state_cache[key] = hit
        return hit

    def evaluate(self, theta: np.ndarray) -> float:
        eval_idx = self.eval_count
        self.eval_count += 1
        if self.sim.exact:
            return expectation(self.observable, self.noiseless_state(theta))
        if not self.sim.noisy:
            return estimate_expectation_sampled(
                self.observable,
                self.noiseless_state(theta),
                self.sim.shots,
                rng_stream(self.seed, 2, eval_idx, 0),
            )
        return self._evaluate_noisy(theta, eval_idx)

    def _evaluate_noisy(self, theta: np.ndarray, eval_idx: int) -> float:
        sim = self.sim
        groups = self._groups
        if not groups:
            return self._identity
        n = self.circuit.n_qubits
        n_groups = len(groups)
        n_traj = min(sim.shots, sim.max_trajectories)
        traj_shots = split_shots(sim.shots, n_traj)
        # per-clique shot allocation, rotated per trajectory so every
        # clique gets coverage even at one shot per trajectory
        alloc = np.zeros((n_traj, n_groups), dtype=int)
        for t, s_t in enumerate(traj_shots):
            base = split_shots(s_t, n_groups)
            for g in range(n_groups):
                alloc[t, g] = base[(g - t) % n_groups]

        engine = self._engine
        tables = None
        noiseless_probs = None
        if engine is not None:
            theta = bind_check(self.circuit, theta)
            tables = engine.tables(theta)
            noiseless_probs = engine.state_probs(tables[1][-1])
        pooled: list[list[np.ndarray]] = [[] for _ in groups]
        parent = np.random.Philox(np.random.SeedSequence(self.seed, spawn_key=(2, eval_idx)))
        for t in range(n_traj):
            rng = np.random.Generator(parent.jumped(t))
            events = draw_noise_events(self.circuit, sim.noise, rng, self._noise_sites)
            if not events:
                if noiseless_probs is None:
                    base_state = self.noiseless_state(theta)
                    noiseless_probs = [group_probabilities(base_state, g) for g in groups]
                probs = noiseless_probs
            elif engine is not None:
                probs = engine.trajectory_probs(events, tables)
            else:
                state = execute_with_noise_events(
                    self.circuit, theta, init_zero(n), events
                )
                probs = [group_probabilities(state, g) for g in groups]
            for g in range(n_groups):
                s_g = int(alloc[t, g])
                if s_g:
                    pooled[g].append(_draw_outcomes(probs[g], s_g, rng, sim.noise.p_readout, n))
        # Pooling all trajectories' outcomes per clique gives the same
        # number as the shot-weighted average of per-trajectory means.
        total = self._identity
        for g in range(n_groups):
            total += estimate_from_outcomes(groups[g], np.concatenate(pooled[g]))
        return float(total)

    def fidelity_probe(self, theta_a: np.ndarray, theta_b: np.ndarray) -> float:
        """Squared overlap of the two noiseless circuit states; counted."""
        self.eval_count += 1
        return fidelity(self.noiseless_state(theta_a), self.noiseless_state(theta_b))

    def shift_multipliers(self):
        """Per-slot angle multipliers, or None where the shift rule fails.

        A slot qualifies only when it feeds exactly one rotation-family
        gate; QAOA's cost slots feed every term and disqualify.
        """
        table = self.circuit.slot_gates()
        out = []
        for gates in table:
            if len(gates) == 1 and gates[0].kind in ROTATION_GATES:
                out.append(gates[0].multiplier)
            else:
                out.append(None)
        return out


class VqdObjective:
    """Level-j deflation objective: <H> plus overlap penalties.

    Overlaps with the frozen lower states always come from noiseless
    statevectors, matching the noiseless excited-state study.
    """

    def __init__(self, inner: CircuitObjective, lower_states: list[StateVector], betas):
        self.inner = inner
        self.lower_states = list(lower_states)
        self.betas = list(betas)
        if len(self.betas) != len(self.lower_states):
            raise ValueError("one penalty weight per deflated state required")

    @property
    def eval_count(self) -> int:
        return self.inner.eval_count

    def evaluate(self, theta: np.ndarray) -> float:
        value = self.inner.evaluate(theta)
        if self.lower_states:
            state = self.inner.noiseless_state(theta)
            for beta, lower in zip(self.betas, self.lower_states):
                value += beta * fidelity(lower, state)
        return value

    def fidelity_probe(self, theta_a, theta_b) -> float:
        return self.inner.fidelity_probe(theta_a, theta_b)

    def shift_multipliers(self):
        # the penalty term is not a single Pauli rotation's expectation
        return None if self.lower_states else self.inner.shift_multipliers()


@dataclass
class VqaResult:
    problem: str
    ansatz: dict
    optimizer: dict
    trace: OptimizerTrace
    best_energy: float
    best_theta: np.ndarray
    seed: int
    energy_convention: str = "actual"
    exact_energy: float | None = None
    bitstring: str | None = None
    cut: float | None = None
    metadata: dict = field(default_factory=dict)


def _run_optimizer(objective, theta0, opt: OptimizerChoice, seed: int) -> OptimizerTrace:
    rng = rng_stream(seed, 1)
    if opt.name == "spsa":
        cfg = opt.config if opt.config is not None else SpsaConfig()
        return spsa_minimize(objective, theta0, opt.iterations, cfg, rng)
    if opt.name == "qnspsa":
        cfg = opt.config if opt.config is not None else QnspsaConfig()
        return qnspsa_minimize(objective, theta0, opt.iterations, cfg, rng)
    cfg = opt.config if opt.config is not None else GradConfig()
    return shift_gradient_minimize(objective, theta0, opt.iterations, cfg)


def _initial_theta(seed: int, n_params: int) -> np.ndarray:
    return rng_stream(seed, 0).uniform(-math.pi, math.pi, n_params)


def _oracle_energy(h: Observable, exact_energy) -> float | None:
    if exact_energy != "auto":
        return exact_energy
    if h.n_qubits > EXACT_ORACLE_MAX_QUBITS:
        return None
    return float(lowest_eigenvalues(h, 1)[0])


def _double_energies(result: VqaResult) -> VqaResult:
    """Rescale every reported energy by exactly 2 (cut values stay actual)."""
    trace = result.trace
    trace.records = [
        TraceRecord(r.iteration, r.evaluations, 2.0 * r.value, 2.0 * r.best)
        for r in trace.records
    ]
    trace.final_value = 2.0 * trace.final_value
    trace.best_value = 2.0 * trace.best_value
    result.best_energy = 2.0 * result.best_energy
    if result.exact_energy is not None:
        result.exact_energy = 2.0 * result.exact_energy
    result.energy_convention = "doubled"
    return result


def vqe_run(
    h: Observable,
    ansatz: Circuit,
    opt: OptimizerChoice,
    sim: SimConfig,
    seed: int,
    doubled: bool = False,
    exact_energy="auto",
    problem: str | None = None,
) -> VqaResult:
    """Minimize <H> over the ansatz parameters from a seeded random start."""
    objective = CircuitObjective(h, ansatz, sim, seed)
    theta0 = _initial_theta(seed, ansatz.n_params)
    trace = _run_optimizer(objective, theta0, opt, seed)
    result = VqaResult(
        problem=problem or f"{h.n_qubits}-qubit observable",
        ansatz={
            "family": "custom",
            "n_params": ansatz.n_params,
            "depth": circuit_depth(ansatz),
        },
        optimizer={"name": opt.name, "iterations": opt.iterations},
        trace=trace,
        best_energy=trace.best_value,
        best_theta=trace.best_theta,
        seed=seed,
        exact_energy=_oracle_energy(h, exact_energy),
        metadata={
            "sim": {
                "shots": sim.shots,
                "noisy": sim.noisy,
                "trajectories": min(sim.shots, sim.max_trajectories) if sim.noisy else None,
            },
            "evaluations": trace.n_evaluations,
        },
    )
    return _double_energies(result) if doubled else result


def qaoa_run(
    h: Observable,
    p: int,
    opt: OptimizerChoice,
    sim: SimConfig,
    seed: int,
    doubled: bool = False,
    exact_energy="auto",
    problem: str | None = None,
    graph: Graph | None = None,
    final_shots: int = 4096,
) -> VqaResult:
    """QAOA: build the p-level ansatz for h, optimize, then sample the
    best state for its most probable bitstring (and, for Max-cut
    problems, the bitstring's cut value)."""
    ansatz = build_qaoa_ansatz(h, p)
    result = vqe_run(h, ansatz, opt, sim, seed, False, exact_energy, problem)
    result.ansatz["family"] = "qaoa"
    result.ansatz["p"] = p

    objective = CircuitObjective(h, ansatz, sim, seed)
    state = objective.noiseless_state(result.best_theta)
    outcomes = _draw_outcomes(
        state.probabilities(), final_shots, rng_stream(seed, 3), 0.0, h.n_qubits
    )
    values, counts = np.unique(outcomes, return_counts=True)
    order = np.lexsort((values, -counts))  # most frequent, ties to smallest index
    top = int(values[order[0]])
    result.bitstring = bitstring(top, h.n_qubits)
    result.metadata["final_shots"] = final_shots
    if graph is not None:
        result.cut = cut_value(graph, result.bitstring)
    return _double_energies(result) if doubled else result


def vqd_run(
    h: Observable,
    ansatz_factory,
    k: int,
    opt: OptimizerChoice,
    sim: SimConfig,
    seed: int,
    betas=None,
    doubled: bool = False,
    problem: str | None = None,
) -> list[VqaResult]:
    """Deflation ladder: level 0 is plain VQE (identical seed streams);
    level j minimizes <H> plus beta_i-weighted overlaps with all frozen
    lower states. Reported energies never include the penalty."""
    if k < 2:
        raise ValueError("k must be >= 2 (use vqe_run for the ground state alone)")
    if betas is None:
        betas = [2.0 * spectral_bound(h)] * (k - 1)
    betas = [float(b) for b in betas]
    if len(betas) != k - 1:
        raise ValueError(f"need {k - 1} penalty weights, got {len(betas)}")
    if any(b <= 0 for b in betas):
        raise ValueError("penalty weights must be positive")

    results: list[VqaResult] = []
    lower_states: list[StateVector] = []
    for level in range(k):
        level_seed = seed if level == 0 else int(rng_stream(seed, 10, level).integers(2**31))
        ansatz = ansatz_factory(level)
        inner = CircuitObjective(h, ansatz, sim, level_seed)
        objective = VqdObjective(inner, lower_states, betas[:level])
        theta0 = _initial_theta(level_seed, ansatz.n_params)
        trace = _run_optimizer(objective, theta0, opt, level_seed)
        best_state = inner.noiseless_state(trace.best_theta)
        energy = expectation(h, best_state)
        result = VqaResult(
            problem=problem or f"{h.n_qubits}-qubit observable",
            ansatz={
                "family": "custom",
                "n_params": ansatz.n_params,
                "depth": circuit_depth(ansatz),
            },
            optimizer={"name": opt.name, "iterations": opt.iterations},
            trace=trace,
            best_energy=energy,
            best_theta=trace.best_theta,
            seed=level_seed,
            metadata={"level": level, "penalty_weights": betas[:level]},
        )
        if level > 0 and energy < results[-1].best_energy:
            warnings.warn(
                f"VQD level {level} energy {energy:.6f} fell below level "
                f"{level - 1}'s {results[-1].best_energy:.6f}; optimization likely failed",
                stacklevel=2,
            )
        results.append(result)
        lower_states.append(best_state)
    if doubled:
        results = [_double_energies(r) for r in results]
    return results


@dataclass(frozen=True)
class GapRow:
    n_spins: int
    e0: float
    e1: float
    gap: float
    parity: str


def energy_gap_scan(
    n_values,
    J: float = 1.0,
    alpha: float = -0.1,
    half_prefactor: bool = True,
    method: str = "exact",
    vqd_reps=None,
    vqd_opt: OptimizerChoice | None = None,
    seed: int = 11,
) -> list[GapRow]:
    """Two lowest chain energies per size, flagged by even/odd parity.

    method "exact" uses the eigenvalue oracles; "vqd" runs a two-level
    deflation with an ansatz of vqd_reps(n) repetitions (default n//2).
    """
    from .circuits import build_efficient_su2
    from .problems import MgmParams, build_mgm

    if method not in ("exact", "vqd"):
        raise ValueError(f"unknown method {method!r}")
    if vqd_reps is None:
        vqd_reps = lambda n: max(2, n // 2)
    rows = []
    for n in n_values:
        h = build_mgm(MgmParams(n, J, alpha, half_prefactor))
        if method == "exact":
            e0, e1 = (float(v) for v in lowest_eigenvalues(h, 2))
        else:
            opt = vqd_opt if vqd_opt is not None else OptimizerChoice("grad", 300)
            factory = lambda level, n=n: build_efficient_su2(n, vqd_reps(n))
            results = vqd_run(h, factory, 2, opt, SimConfig(), seed)
            e0, e1 = results[0].best_energy, results[1].best_energy
        rows.append(GapRow(n, e0, e1, e1 - e0, "even" if n % 2 == 0 else "odd"))
    return rows
