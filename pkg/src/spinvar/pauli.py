"""Pauli strings and real-weighted Pauli-sum observables.

A string on n qubits is a pair of bitmasks (x_mask, z_mask): bit q of
x_mask means an X factor on qubit q, bit q of z_mask a Z factor, both
bits together a Y. Its action on a basis state is

    P|j> = i^y * (-1)^popcount(j & z_mask) |j ^ x_mask>

with y the number of Y factors, so applying P to an amplitude vector is
a sign flip pattern, a global i^y, and an index permutation - never a
matrix build.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._bits import parity, popcount
from .statevector import MAX_QUBITS, StateVector

# (n_qubits, x_mask, z_mask) -> (scalar, signs, permutation or None)
_ACTION_CACHE: dict[tuple[int, int, int], tuple[complex, np.ndarray, np.ndarray | None]] = {}


def _action_tables(n_qubits: int, x_mask: int, z_mask: int):
    key = (n_qubits, x_mask, z_mask)
    hit = _ACTION_CACHE.get(key)
    if hit is None:
        idx = np.arange(2**n_qubits)
        signs = (1 - 2 * parity(idx & z_mask)).astype(np.int8)
        perm = (idx ^ x_mask) if x_mask else None
        scalar = 1j ** (popcount(x_mask & z_mask) % 4)
        hit = (scalar, signs, perm)
        if n_qubits <= 20:
            if len(_ACTION_CACHE) >= 512:
                _ACTION_CACHE.pop(next(iter(_ACTION_CACHE)))
            _ACTION_CACHE[key] = hit
    return hit


@dataclass(frozen=True)
class PauliString:
    """An n-qubit tensor product of I, X, Y, Z factors."""

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        full = (1 << self.n_qubits) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask has bits beyond the qubit count")

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def weight(self) -> int:
        """Number of non-identity factors."""
        return popcount(self.x_mask | self.z_mask)

    @property
    def label(self) -> str:
        chars = []
        for q in range(self.n_qubits):
            x = (self.x_mask >> q) & 1
            z = (self.z_mask >> q) & 1
            chars.append("IXZY"[x + 2 * z])
        return "".join(chars)

    def apply_amplitudes(self, amplitudes: np.ndarray) -> np.ndarray:
        """Return P @ amplitudes as a fresh array."""
        scalar, signs, perm = _action_tables(self.n_qubits, self.x_mask, self.z_mask)
        out = scalar * (signs * amplitudes)
        return out[perm] if perm is not None else out

    def sign_vector(self) -> np.ndarray:
        """The +/-1 diagonal of a Z-only string."""
        if self.x_mask != 0:
            raise ValueError("sign_vector is only defined for diagonal (X-free) strings")
        return _action_tables(self.n_qubits, 0, self.z_mask)[1]


def pauli_from_label(label: str) -> PauliString:
    """Parse a label like "XIZY"; character q acts on qubit q."""
    if not label:
        raise ValueError("empty Pauli label")
    x_mask = z_mask = 0
    for q, ch in enumerate(label):
        if ch == "X":
            x_mask |= 1 << q
        elif ch == "Y":
            x_mask |= 1 << q
            z_mask |= 1 << q
        elif ch == "Z":
            z_mask |= 1 << q
        elif ch != "I":
            raise ValueError(f"bad Pauli character {ch!r} at position {q}")
    return PauliString(len(label), x_mask, z_mask)


def apply_string(p: PauliString, amplitudes: np.ndarray) -> np.ndarray:
    return p.apply_amplitudes(amplitudes)


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    string: PauliString

    def __post_init__(self):
        if not np.isfinite(self.coefficient):
            raise ValueError(f"non-finite coefficient {self.coefficient}")


MERGE_THRESHOLD = 1e-15


@dataclass(frozen=True)
class Observable:
    """A real-weighted sum of Pauli strings on a fixed qubit count.

    Construction merges repeated strings (first-appearance order) and
    drops terms whose merged coefficient is below 1e-15 in magnitude.
    """

    n_qubits: int
    terms: tuple[PauliTerm, ...]

    def __post_init__(self):
        merged: dict[tuple[int, int], float] = {}
        keep: dict[tuple[int, int], PauliString] = {}
        for term in self.terms:
            if term.string.n_qubits != self.n_qubits:
                raise ValueError(
                    f"term on {term.string.n_qubits} qubits in a {self.n_qubits}-qubit observable"
                )
            key = (term.string.x_mask, term.string.z_mask)
            merged[key] = merged.get(key, 0.0) + float(term.coefficient)
            keep.setdefault(key, term.string)
        pruned = tuple(
            PauliTerm(c, keep[k]) for k, c in merged.items() if abs(c) > MERGE_THRESHOLD
        )
        object.__setattr__(self, "terms", pruned)

    @property
    def num_terms(self) -> int:
        return len(self.terms)


def observable_from_pairs(n_qubits: int, pairs) -> Observable:
    """Build an Observable from (coefficient, label-or-PauliString) pairs."""
    terms = []
    for coeff, p in pairs:
        if isinstance(p, str):
            p = pauli_from_label(p)
        terms.append(PauliTerm(float(coeff), p))
    return Observable(n_qubits, tuple(terms))


def observable_matvec(observable: Observable, amplitudes: np.ndarray) -> np.ndarray:
    """H @ amplitudes without forming the 2^n x 2^n matrix."""
    out = np.zeros_like(amplitudes, dtype=complex)
    for term in observable.terms:
        if term.string.is_identity:
            out += term.coefficient * amplitudes
        else:
            out += term.coefficient * term.string.apply_amplitudes(amplitudes)
    return out


def expectation(observable: Observable, state: StateVector) -> float:
    """<state|observable|state>, checked to be real.

    Raises if the state norm drifts from 1 by more than 1e-8 or the
    imaginary residue exceeds 1e-10.
    """
    if observable.n_qubits != state.n_qubits:
        raise ValueError("qubit count mismatch between observable and state")
    if abs(state.norm() - 1.0) > 1e-8:
        raise ValueError(f"state norm {state.norm()} is not 1 within 1e-8")
    value = complex(np.vdot(state.amplitudes, observable_matvec(observable, state.amplitudes)))
    if abs(value.imag) > 1e-10:
        raise ValueError(f"expectation has imaginary residue {value.imag}")
    return value.real


def spectral_bound(observable: Observable) -> float:
    """Sum of absolute coefficients; an upper bound on the spectral norm."""
    return float(sum(abs(t.coefficient) for t in observable.terms))


def to_text(observable: Observable) -> str:
    """One term per line: coefficient, a tab, then the full label."""
    lines = [f"{t.coefficient!r}\t{t.string.label}" for t in observable.terms]
    return "\n".join(lines) + "\n"


def from_text(text: str, n_qubits: int | None = None) -> Observable:
    """Inverse of to_text. Labels fix the qubit count unless one is given."""
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'coefficient<TAB>label', got {raw!r}")
        try:
            coeff = float(parts[0])
        except ValueError:
            raise ValueError(f"line {lineno}: bad coefficient {parts[0]!r}") from None
        try:
            string = pauli_from_label(parts[1])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if n_qubits is None:
            n_qubits = string.n_qubits
        elif string.n_qubits != n_qubits:
            raise ValueError(
                f"line {lineno}: label length {string.n_qubits} does not match {n_qubits}"
            )
        terms.append(PauliTerm(coeff, string))
    if n_qubits is None:
        raise ValueError("no terms found")
    return Observable(n_qubits, tuple(terms))
