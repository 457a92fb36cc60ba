"""Bit-level helpers shared by the statevector and Pauli machinery.

Endianness convention, fixed project-wide: qubit 0 is the lowest-order bit
of an amplitude index, and character 0 of a label or bitstring refers to
qubit 0.
"""

from __future__ import annotations

import numpy as np


def parity(values: np.ndarray | int) -> np.ndarray | int:
    """Popcount parity (0 or 1) of integers below 2**32, elementwise."""
    v = np.asarray(values)
    v = v ^ (v >> 16)
    v = v ^ (v >> 8)
    v = v ^ (v >> 4)
    v = v ^ (v >> 2)
    v = v ^ (v >> 1)
    out = v & 1
    return out if out.ndim else int(out)


def popcount(value: int) -> int:
    return bin(value).count("1")


def bitstring(index: int, n_qubits: int) -> str:
    """Render a basis index as a bitstring with character i = qubit i."""
    return "".join("1" if (index >> q) & 1 else "0" for q in range(n_qubits))


def index_of(bits: str) -> int:
    """Inverse of :func:`bitstring`."""
    value = 0
    for q, ch in enumerate(bits):
        if ch == "1":
            value |= 1 << q
        elif ch != "0":
            raise ValueError(f"invalid bitstring character {ch!r} at position {q}")
    return value
