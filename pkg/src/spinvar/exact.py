"""Classical eigenvalue oracles: dense diagonalization and matrix-free Lanczos.

The dense route is exact and capped at 12 qubits; the Lanczos route
works from observable matvecs only, with full reorthogonalization and a
deflated second run so a doubly degenerate ground state is reported
twice rather than collapsed.
"""

from __future__ import annotations

import numpy as np

from .pauli import Observable, _action_tables, observable_matvec, spectral_bound

DENSE_MAX_QUBITS = 12
LANCZOS_MAX_QUBITS = 26
LANCZOS_MAX_K = 4


class LanczosConvergenceError(RuntimeError):
    """Ritz values failed to settle; .ritz_values holds the best estimates."""

    def __init__(self, message: str, ritz_values):
        super().__init__(message)
        self.ritz_values = ritz_values


def dense_matrix(observable: Observable) -> np.ndarray:
    """The full 2^n x 2^n Hermitian matrix, built column-wise per term."""
    if observable.n_qubits > DENSE_MAX_QUBITS:
        raise ValueError(
            f"dense matrix capped at {DENSE_MAX_QUBITS} qubits, got {observable.n_qubits}"
        )
    dim = 2**observable.n_qubits
    matrix = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for term in observable.terms:
        scalar, signs, perm = _action_tables(
            observable.n_qubits, term.string.x_mask, term.string.z_mask
        )
        rows = perm if perm is not None else cols
        matrix[rows, cols] += term.coefficient * scalar * signs
    return matrix


def dense_spectrum(observable: Observable) -> np.ndarray:
    """All eigenvalues, ascending."""
    return np.linalg.eigvalsh(dense_matrix(observable))


def _tridiagonal_eig(alphas, betas, vectors=False):
    m = len(alphas)
    t = np.diag(alphas)
    if m > 1:
        off = np.asarray(betas[: m - 1])
        t += np.diag(off, 1) + np.diag(off, -1)
    return np.linalg.eigh(t) if vectors else (np.linalg.eigvalsh(t), None)


def _lanczos_run(matvec, dim, k, tol, max_iter, rng):
    """One Lanczos sweep; returns (k lowest Ritz values, ground Ritz vector).

    Fully reorthogonalized. Convergence = k lowest Ritz values drifting
    less than tol over 5 consecutive steps AND their residual bounds
    beta*|last eigenvector component| below tol, or the Krylov space
    exhausting the dimension (then the values are exact).
    """
    q = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    q /= np.linalg.norm(q)

    basis: list[np.ndarray] = []
    alphas: list[float] = []
    betas: list[float] = []
    previous = None
    stable = 0
    limit = min(max_iter, dim)
    for j in range(limit):
        basis.append(q)
        w = matvec(q)
        alphas.append(float(np.vdot(q, w).real))
        for _ in range(2):  # one Gram-Schmidt pass is not enough near breakdown
            for b in basis:
                w -= np.vdot(b, w) * b
        beta = float(np.linalg.norm(w))
        # true exhaustion only: breakdown or a full-dimension basis means the
        # Ritz values are exact; an iteration cap without tolerance is an error
        exhausted = beta < 1e-12 or j == dim - 1
        if j + 1 >= k:
            values, vectors = _tridiagonal_eig(alphas, betas, vectors=True)
            ritz = values[:k]
            residual = beta * float(np.max(np.abs(vectors[-1, :k])))
            if previous is not None and np.max(np.abs(ritz - previous)) < tol:
                stable += 1
            else:
                stable = 0
            previous = ritz
            if (stable >= 5 and residual < tol) or exhausted:
                ground = np.zeros(dim, dtype=complex)
                for coeff, b in zip(vectors[:, 0], basis):
                    ground += coeff * b
                ground /= np.linalg.norm(ground)
                return values[:k], ground
        if exhausted:
            raise LanczosConvergenceError(
                f"Krylov space exhausted after {j + 1} steps with fewer than {k} Ritz values",
                previous if previous is not None else [],
            )
        betas.append(beta)
        q = w / beta
    raise LanczosConvergenceError(
        f"no convergence within {limit} iterations (drift tolerance {tol})", previous
    )


def lanczos_lowest(
    observable: Observable,
    k: int = 1,
    tol: float = 1e-9,
    max_iter: int = 600,
    seed: int = 7,
) -> np.ndarray:
    """The k lowest eigenvalues, with multiplicity, via deflated restarts.

    A single Lanczos sweep converges to one vector per eigenspace, so
    each of the k values comes from its own sweep on the operator
    H + s * sum(|v_i><v_i|) with all previously found vectors shifted
    above the spectrum (s exceeds the spectral width). Each sweep's
    lowest Ritz value is then the next eigenvalue of H, degenerate
    copies included, matching what a dense solve lists. Memory is the
    full Krylov basis; practical well below the formal 26-qubit cap.
    """
    if not 1 <= k <= LANCZOS_MAX_K:
        raise ValueError(f"k must be in [1, {LANCZOS_MAX_K}], got {k}")
    if observable.n_qubits > LANCZOS_MAX_QUBITS:
        raise ValueError(f"lanczos capped at {LANCZOS_MAX_QUBITS} qubits")
    dim = 2**observable.n_qubits
    base = lambda v: observable_matvec(observable, v)
    shift = 2.0 * spectral_bound(observable) + 1.0
    k_eff = min(k, dim)
    seeds = np.random.SeedSequence(seed).spawn(k_eff)
    values: list[float] = []
    vectors: list[np.ndarray] = []
    for i in range(k_eff):
        def matvec(v, _held=tuple(vectors)):
            out = base(v)
            for u in _held:
                out += (shift * np.vdot(u, v)) * u
            return out

        found, vec = _lanczos_run(matvec, dim, 1, tol, max_iter, np.random.default_rng(seeds[i]))
        values.append(float(found[0]))
        vectors.append(vec)
    return np.sort(values)


def lowest_eigenvalues(observable: Observable, k: int = 1) -> np.ndarray:
    """Oracle chooser: dense up to 8 qubits, Lanczos beyond."""
    if observable.n_qubits <= 8:
        return dense_spectrum(observable)[:k]
    return lanczos_lowest(observable, k=k)
