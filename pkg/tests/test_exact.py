"""Eigenvalue oracles: dense diagonalization and deflated Lanczos."""

import numpy as np
import pytest

from spinvar.exact import (
    LanczosConvergenceError,
    dense_matrix,
    dense_spectrum,
    lanczos_lowest,
    lowest_eigenvalues,
)
from spinvar.pauli import observable_from_pairs
from spinvar.problems import MgmParams, build_mgm

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_matrix(obs):
    dim = 2**obs.n_qubits
    total = np.zeros((dim, dim), dtype=complex)
    for term in obs.terms:
        m = np.eye(1, dtype=complex)
        for ch in term.string.label:
            m = np.kron(SINGLE[ch], m)
        total += term.coefficient * m
    return total


def random_observable(n, n_terms, seed):
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(n_terms):
        label = "".join(rng.choice(list("IXYZ")) for _ in range(n))
        if set(label) == {"I"}:
            label = "Z" + label[1:]
        pairs.append((float(rng.normal()), label))
    return observable_from_pairs(n, pairs)


def test_dense_matrix_matches_kron_oracle():
    obs = random_observable(4, 6, seed=2)
    np.testing.assert_allclose(dense_matrix(obs), kron_matrix(obs), atol=1e-12)


def test_dense_spectrum_sorted_and_correct():
    obs = random_observable(3, 5, seed=3)
    spec = dense_spectrum(obs)
    want = np.linalg.eigvalsh(kron_matrix(obs))
    np.testing.assert_allclose(spec, want, atol=1e-10)
    assert (np.diff(spec) >= -1e-12).all()


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_lanczos_matches_dense(seed):
    obs = random_observable(5, 8, seed=seed)
    want = np.linalg.eigvalsh(kron_matrix(obs))[:3]
    got = lanczos_lowest(obs, k=3)
    np.testing.assert_allclose(got, want, atol=1e-8)


def test_lanczos_reports_degenerate_copies():
    # odd-length chain: the ground level is a degenerate doublet
    h = build_mgm(MgmParams(5))
    want = np.linalg.eigvalsh(kron_matrix(h))[:2]
    assert want[1] - want[0] < 1e-10  # doublet confirmed by the dense oracle
    got = lanczos_lowest(h, k=2)
    np.testing.assert_allclose(got, want, atol=1e-8)


def test_lanczos_reseed_invariance():
    obs = random_observable(4, 7, seed=5)
    a = lanczos_lowest(obs, k=2, seed=7)
    b = lanczos_lowest(obs, k=2, seed=1234)
    np.testing.assert_allclose(a, b, atol=1e-8)


def test_lanczos_handles_diagonal_degeneracy():
    obs = observable_from_pairs(2, [(1.0, "ZI")])
    got = lanczos_lowest(obs, k=2)
    np.testing.assert_allclose(got, [-1.0, -1.0], atol=1e-9)


def test_lanczos_convergence_error_mentions_ritz():
    obs = random_observable(6, 10, seed=8)
    with pytest.raises(LanczosConvergenceError) as excinfo:
        lanczos_lowest(obs, k=1, tol=1e-14, max_iter=3)
    assert excinfo.value.ritz_values is not None


def test_lowest_eigenvalues_dispatch_consistency():
    # the dense and Lanczos routes must agree where both apply
    h = build_mgm(MgmParams(8))
    dense = dense_spectrum(h)[:2]
    kry = lanczos_lowest(h, k=2)
    np.testing.assert_allclose(kry, dense, atol=1e-8)
    np.testing.assert_allclose(lowest_eigenvalues(h, 2), dense, atol=1e-12)


def test_mgm_reference_energies():
    assert lowest_eigenvalues(build_mgm(MgmParams(4)), 1)[0] == pytest.approx(-4.1, abs=1e-6)
    assert lowest_eigenvalues(build_mgm(MgmParams(8)), 1)[0] == pytest.approx(
        -7.62051, abs=1e-4
    )
