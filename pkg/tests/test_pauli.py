"""Pauli strings and observables against dense kron-built oracles."""

import numpy as np
import pytest

from spinvar.pauli import (
    Observable,
    PauliString,
    PauliTerm,
    expectation,
    from_text,
    observable_from_pairs,
    observable_matvec,
    pauli_from_label,
    spectral_bound,
    to_text,
)
from spinvar.statevector import StateVector

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}


def dense_string(label):
    """Kron with qubit 0 as the least significant axis."""
    out = np.eye(1, dtype=complex)
    for ch in label:
        out = np.kron(SINGLE[ch], out)
    return out


def dense_observable(obs):
    dim = 2**obs.n_qubits
    total = np.zeros((dim, dim), dtype=complex)
    for term in obs.terms:
        total += term.coefficient * dense_string(term.string.label)
    return total


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


def test_label_round_trip():
    for label in ("X", "IZ", "XYZI", "YYYY", "IIIII"):
        assert pauli_from_label(label).label == label


def test_label_rejects_garbage():
    with pytest.raises(ValueError):
        pauli_from_label("XQ")
    with pytest.raises(ValueError):
        pauli_from_label("")


def test_mask_bounds_checked():
    with pytest.raises(ValueError):
        PauliString(2, 1 << 2, 0)


def test_weight_and_identity():
    p = pauli_from_label("XIYZ")
    assert p.weight == 3
    assert not p.is_identity
    assert pauli_from_label("III").is_identity


@pytest.mark.parametrize("label", ["X", "Y", "Z", "XY", "ZZ", "IYXZ", "YZXY"])
def test_apply_matches_dense(label):
    n = len(label)
    p = pauli_from_label(label)
    v = random_state(n, seed=hash(label) % 1000)
    np.testing.assert_allclose(p.apply_amplitudes(v), dense_string(label) @ v, atol=1e-12)


def test_y_phase_convention():
    # Y|0> = i|1>, Y|1> = -i|0>
    p = pauli_from_label("Y")
    np.testing.assert_allclose(p.apply_amplitudes(np.array([1.0, 0.0])), [0, 1j])
    np.testing.assert_allclose(p.apply_amplitudes(np.array([0.0, 1.0])), [-1j, 0])


def test_sign_vector_is_z_diagonal():
    p = pauli_from_label("ZIZ")
    np.testing.assert_allclose(np.diag(dense_string("ZIZ")).real, p.sign_vector())
    with pytest.raises(ValueError):
        pauli_from_label("XZ").sign_vector()


def test_expectation_real_and_matches_dense():
    obs = observable_from_pairs(3, [(0.7, "XXI"), (-0.3, "IZZ"), (0.1, "YIY"), (0.5, "III")])
    v = random_state(3, seed=5)
    got = expectation(obs, StateVector(3, v))
    want = (v.conj() @ (dense_observable(obs) @ v)).real
    assert isinstance(got, float)
    assert got == pytest.approx(want, abs=1e-12)


def test_matvec_matches_dense():
    obs = observable_from_pairs(4, [(1.0, "XYZI"), (0.25, "ZZII"), (-2.0, "IIXX")])
    v = random_state(4, seed=9)
    np.testing.assert_allclose(
        observable_matvec(obs, v), dense_observable(obs) @ v, atol=1e-12
    )


def test_observable_validates_qubit_counts():
    with pytest.raises(ValueError):
        Observable(2, (PauliTerm(1.0, pauli_from_label("XXX")),))


def test_spectral_bound_dominates_eigenvalues():
    obs = observable_from_pairs(3, [(0.9, "XXI"), (-1.4, "IZZ"), (0.2, "YYY")])
    eigs = np.linalg.eigvalsh(dense_observable(obs))
    bound = spectral_bound(obs)
    assert bound >= abs(eigs).max() - 1e-12
    assert bound == pytest.approx(0.9 + 1.4 + 0.2)


def test_text_round_trip():
    obs = observable_from_pairs(2, [(0.5, "XZ"), (-1.25, "YI")])
    again = from_text(to_text(obs))
    assert again.n_qubits == 2
    assert [(t.coefficient, t.string.label) for t in again.terms] == [
        (t.coefficient, t.string.label) for t in obs.terms
    ]
