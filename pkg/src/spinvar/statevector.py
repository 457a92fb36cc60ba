"""Exact 2^n-amplitude simulation: gates, sampling, and stochastic noise.

Qubit 0 is the lowest-order bit of the amplitude index. All unitary
operations mutate the state in place and preserve the norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ._bits import bitstring, parity

if TYPE_CHECKING:
    from .pauli import Observable, PauliString

MAX_QUBITS = 26

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
S_DAGGER = np.array([[1, 0], [0, -1j]], dtype=complex)


def rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]])


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    """General single-qubit rotation with three Euler angles."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]]
    )


@dataclass
class StateVector:
    """2^n complex amplitudes; qubit q lives at bit q of the index."""

    n_qubits: int
    amplitudes: np.ndarray

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def init_zero(n_qubits: int) -> StateVector:
    """The all-zeros computational basis state |0...0>."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def _apply_1q_amps(amps: np.ndarray, u: np.ndarray, qubit: int, n_qubits: int) -> None:
    """Unchecked in-place 2x2 gate on raw amplitudes."""
    view = amps.reshape(2 ** (n_qubits - 1 - qubit), 2, 2**qubit)
    v0 = view[:, 0, :]
    v1 = view[:, 1, :]
    t0 = u[0, 0] * v0 + u[0, 1] * v1
    t1 = u[1, 0] * v0 + u[1, 1] * v1
    view[:, 0, :] = t0
    view[:, 1, :] = t1


def apply_1q(state: StateVector, u: np.ndarray, qubit: int) -> StateVector:
    """Apply a 2x2 unitary to one qubit, in place."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
    if not np.allclose(u @ u.conj().T, np.eye(2), atol=1e-10):
        raise ValueError("matrix is not unitary within 1e-10")
    if not 0 <= qubit < state.n_qubits:
        raise ValueError(f"qubit index {qubit} out of range for {state.n_qubits} qubits")
    _apply_1q_amps(state.amplitudes, u, qubit, state.n_qubits)
    return state


_CX_CACHE: dict[tuple[int, int, int], tuple[np.ndarray, np.ndarray]] = {}


def _cx_indices(n_qubits: int, control: int, target: int) -> tuple[np.ndarray, np.ndarray]:
    key = (n_qubits, control, target)
    hit = _CX_CACHE.get(key)
    if hit is None:
        idx = np.arange(2**n_qubits)
        src = idx[((idx >> control) & 1 == 1) & ((idx >> target) & 1 == 0)]
        hit = (src, src | (1 << target))
        if n_qubits <= 20:
            if len(_CX_CACHE) >= 512:
                _CX_CACHE.pop(next(iter(_CX_CACHE)))
            _CX_CACHE[key] = hit
    return hit


def apply_cx(state: StateVector, control: int, target: int) -> StateVector:
    """Apply a controlled-X gate, in place."""
    n = state.n_qubits
    if control == target:
        raise ValueError("control and target must differ")
    if not (0 <= control < n and 0 <= target < n):
        raise ValueError(f"qubit indices ({control}, {target}) out of range for {n} qubits")
    src, dst = _cx_indices(n, control, target)
    amps = state.amplitudes
    tmp = amps[src].copy()
    amps[src] = amps[dst]
    amps[dst] = tmp
    return state


def apply_pauli_rotation(state: StateVector, p: "PauliString", angle: float) -> StateVector:
    """Apply exp(-i * angle/2 * P) for a non-identity Pauli string P, in place."""
    if p.is_identity:
        raise ValueError("rotation about the identity is a global phase; refusing silent no-op")
    if p.n_qubits != state.n_qubits:
        raise ValueError(f"qubit count mismatch: string has {p.n_qubits}, state has {state.n_qubits}")
    c = math.cos(angle / 2)
    s = math.sin(angle / 2)
    if p.x_mask == 0:
        # diagonal string: fused phase multiply, no amplitude shuffling
        state.amplitudes *= c - 1j * s * p.sign_vector()
    else:
        state.amplitudes = c * state.amplitudes - 1j * s * p.apply_amplitudes(state.amplitudes)
    return state


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


@dataclass(frozen=True)
class NoiseConfig:
    """Depolarizing-trajectory and readout noise parameters.

    Realized as stochastic Pauli insertions: after each gate touching k
    qubits, with probability p1 (k=1) or p2 (k>1) a uniformly random
    non-identity Pauli on those qubits is applied. Readout flips each
    measured bit independently with probability p_readout.
    """

    p1: float = 0.001
    p2: float = 0.01
    p_readout: float = 0.01
    enabled: bool = True

    def __post_init__(self):
        for name in ("p1", "p2", "p_readout"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be a probability, got {v}")


def _draw_outcomes(
    probs: np.ndarray, shots: int, rng: np.random.Generator, p_readout: float, n_qubits: int
) -> np.ndarray:
    """Sample basis indices by inverse-CDF, then apply readout bit flips."""
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    outcomes = np.searchsorted(cdf, rng.random(shots), side="right")
    if p_readout > 0.0:
        flips = rng.random((shots, n_qubits)) < p_readout
        outcomes = outcomes ^ (flips * (1 << np.arange(n_qubits))).sum(axis=1)
    return outcomes


def sample_counts(
    state: StateVector, shots: int, rng: np.random.Generator, p_readout: float = 0.0
) -> dict[str, int]:
    """Histogram of measured bitstrings (character i = qubit i); sums to shots.

    Sampling is inverse-CDF on the cumulative probability vector.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    outcomes = _draw_outcomes(state.probabilities(), shots, rng, p_readout, state.n_qubits)
    values, counts = np.unique(outcomes, return_counts=True)
    return {bitstring(int(v), state.n_qubits): int(c) for v, c in zip(values, counts)}


@dataclass(frozen=True)
class MeasurementGroup:
    """A qubit-wise-commuting clique measured in a single product basis."""

    x_qubits: int  # mask of qubits rotated from the X basis
    y_qubits: int  # mask of qubits rotated from the Y basis
    terms: tuple[tuple[float, int], ...]  # (coefficient, support mask)


def measurement_groups(observable: "Observable") -> tuple[list[MeasurementGroup], float]:
    """Greedy first-fit grouping of terms into qubit-wise-commuting cliques.

    Terms are scanned in construction order; each joins the first clique
    whose per-qubit measurement bases it does not contradict. Returns the
    cliques plus the coefficient of the identity term (measured for free).
    """
    identity_coeff = 0.0
    open_groups: list[dict] = []
    for term in observable.terms:
        tx, tz = term.string.x_mask, term.string.z_mask
        if tx == 0 and tz == 0:
            identity_coeff += term.coefficient
            continue
        t_x, t_y, t_z = tx & ~tz, tx & tz, tz & ~tx
        for g in open_groups:
            if (t_x & (g["y"] | g["z"])) or (t_y & (g["x"] | g["z"])) or (t_z & (g["x"] | g["y"])):
                continue
            g["x"] |= t_x
            g["y"] |= t_y
            g["z"] |= t_z
            g["terms"].append((term.coefficient, tx | tz))
            break
        else:
            open_groups.append({"x": t_x, "y": t_y, "z": t_z, "terms": [(term.coefficient, tx | tz)]})
    groups = [
        MeasurementGroup(x_qubits=g["x"], y_qubits=g["y"], terms=tuple(g["terms"]))
        for g in open_groups
    ]
    return groups, identity_coeff


def group_probabilities(state: StateVector, group: MeasurementGroup) -> np.ndarray:
    """Outcome probabilities after rotating the clique's basis to Z."""
    amps = state.amplitudes.copy()
    n = state.n_qubits
    for q in range(n):
        bit = 1 << q
        if group.y_qubits & bit:
            _apply_1q_amps(amps, S_DAGGER, q, n)
            _apply_1q_amps(amps, HADAMARD, q, n)
        elif group.x_qubits & bit:
            _apply_1q_amps(amps, HADAMARD, q, n)
    return np.abs(amps) ** 2


def estimate_from_outcomes(group: MeasurementGroup, outcomes: np.ndarray) -> float:
    """Weighted eigenvalue average of a clique's terms over sampled outcomes."""
    total = 0.0
    for coeff, support in group.terms:
        total += coeff * float(np.mean(1.0 - 2.0 * parity(outcomes & support)))
    return total


def split_shots(shots: int, n_groups: int) -> list[int]:
    """Equal split with the remainder assigned to the earliest groups."""
    base, rem = divmod(shots, n_groups)
    return [base + (1 if i < rem else 0) for i in range(n_groups)]


def estimate_expectation_sampled(
    observable: "Observable",
    state: StateVector,
    shots: int,
    rng: np.random.Generator,
    p_readout: float = 0.0,
) -> float:
    """Shot-based estimate of <state|observable|state>.

    Terms are grouped into qubit-wise-commuting cliques, each clique is
    rotated to the Z basis and sampled with its share of the shot budget.
    Unbiased at p_readout = 0.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if observable.n_qubits != state.n_qubits:
        raise ValueError("qubit count mismatch between observable and state")
    groups, total = measurement_groups(observable)
    if not groups:
        return total
    for group, shots_g in zip(groups, split_shots(shots, len(groups))):
        if shots_g == 0:
            continue
        probs = group_probabilities(state, group)
        outcomes = _draw_outcomes(probs, shots_g, rng, p_readout, state.n_qubits)
        total += estimate_from_outcomes(group, outcomes)
    return total
