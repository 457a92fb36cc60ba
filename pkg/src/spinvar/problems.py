"""Problem Hamiltonians: Majumdar-Ghosh spin chain and Max-cut Ising.

Both builders return Observables over qubit q = spin/node q. The chain
uses periodic boundary conditions; next-nearest-neighbour bonds are
deduplicated as unordered pairs, so n=4 has exactly two of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._bits import bitstring, index_of
from .pauli import Observable, PauliString, PauliTerm


@dataclass(frozen=True)
class Graph:
    """Weighted undirected graph; edges stored as (u, v, w) with u < v."""

    n_nodes: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.n_nodes < 1:
            raise ValueError(f"n_nodes must be positive, got {self.n_nodes}")
        seen = set()
        normalized = []
        for u, v, w in self.edges:
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise ValueError(f"edge ({u}, {v}) out of range for {self.n_nodes} nodes")
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not math.isfinite(w):
                raise ValueError(f"non-finite weight on edge ({u}, {v})")
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in seen:
                raise ValueError(f"duplicate edge ({a}, {b})")
            seen.add((a, b))
            normalized.append((a, b, float(w)))
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))


@dataclass(frozen=True)
class MgmParams:
    """Spin-chain parameters: NN coupling J, NNN ratio alpha."""

    n_spins: int
    J: float = 1.0
    alpha: float = -0.1
    half_prefactor: bool = True

    def __post_init__(self):
        if self.n_spins < 4:
            raise ValueError(
                f"n_spins must be >= 4 for next-nearest-neighbour bonds, got {self.n_spins}"
            )
        if not (math.isfinite(self.J) and math.isfinite(self.alpha)):
            raise ValueError("J and alpha must be finite")


def _pair_string(n: int, a: int, b: int, kind: str) -> PauliString:
    mask = (1 << a) | (1 << b)
    if kind == "X":
        return PauliString(n, mask, 0)
    if kind == "Y":
        return PauliString(n, mask, mask)
    return PauliString(n, 0, mask)


def mgm_bonds(n_spins: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Nearest and deduplicated next-nearest neighbour bonds of the ring."""
    nn = [(i, (i + 1) % n_spins) for i in range(n_spins)]
    nnn = []
    seen = set()
    for i in range(n_spins):
        pair = tuple(sorted((i, (i + 2) % n_spins)))
        if pair not in seen:
            seen.add(pair)
            nnn.append(pair)
    return nn, nnn


def build_mgm(params: MgmParams) -> Observable:
    """Heisenberg ring with frustrating next-nearest-neighbour coupling.

    Each bond contributes XX + YY + ZZ with coefficient J (scaled by 1/2
    when half_prefactor, and additionally by alpha on NNN bonds).
    """
    n = params.n_spins
    scale = 0.5 if params.half_prefactor else 1.0
    nn, nnn = mgm_bonds(n)
    # Kind-major term order (all XX bonds, then YY, then ZZ). Grouping the
    # three Paulis of one bond back to back would make the same-angle QAOA
    # rotations multiply into exp(-i a (XX+YY+ZZ)) per bond, which fixes the
    # uniform superposition up to phase, so a cost layer in that order can
    # never move QAOA's initial state.
    terms = []
    for kind in "XYZ":
        for bonds, coeff in ((nn, scale * params.J), (nnn, scale * params.J * params.alpha)):
            for a, b in bonds:
                terms.append(PauliTerm(coeff, _pair_string(n, a, b, kind)))
    return Observable(n, tuple(terms))


def build_maxcut(graph: Graph) -> Observable:
    """Ising cost H_C = sum over edges of (w/2)(Z_u Z_v - I).

    Diagonal: <x|H_C|x> = -cut(x), so the ground energy is minus the
    maximum cut value.
    """
    n = graph.n_nodes
    identity = PauliString(n, 0, 0)
    terms = []
    for u, v, w in graph.edges:
        terms.append(PauliTerm(w / 2.0, _pair_string(n, u, v, "Z")))
        terms.append(PauliTerm(-w / 2.0, identity))
    return Observable(n, tuple(terms))


def cut_value(graph: Graph, assignment: str | int) -> float:
    """Total weight of edges crossing the partition.

    The assignment is a bitstring (character q = node q) or the integer
    it encodes.
    """
    x = index_of(assignment) if isinstance(assignment, str) else int(assignment)
    total = 0.0
    for u, v, w in graph.edges:
        if ((x >> u) ^ (x >> v)) & 1:
            total += w
    return total


BRUTE_FORCE_MAX_NODES = 26
_CHUNK = 1 << 20


def brute_force_maxcut(graph: Graph) -> tuple[float, str]:
    """Exhaustive maximum cut; ties go to the smallest bitstring value.

    Node 0's side is fixed, halving the search to 2^(n-1) assignments,
    scanned in chunks as vectorized edge-parity sums.
    """
    n = graph.n_nodes
    if n > BRUTE_FORCE_MAX_NODES:
        raise ValueError(f"brute force capped at {BRUTE_FORCE_MAX_NODES} nodes, got {n}")
    if n == 1:
        return 0.0, "0"
    best_value = -1.0
    best_x = 0
    total = 1 << (n - 1)
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        x = np.arange(start, stop, dtype=np.int64) << 1  # node 0 stays on side 0
        values = np.zeros(stop - start)
        for u, v, w in graph.edges:
            values += w * (((x >> u) ^ (x >> v)) & 1)
        k = int(np.argmax(values))  # argmax returns the first, i.e. smallest, maximizer
        if values[k] > best_value:
            best_value = float(values[k])
            best_x = int(x[k])
    return best_value, bitstring(best_x, n)


def parse_graph(text: str) -> Graph:
    """Parse an edge-list document.

    The first meaningful line is the node count; each later line is
    `u v w` with the weight optional (default 1). `#` starts a comment.
    """
    n_nodes = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n_nodes is None:
            if len(fields) != 1:
                raise ValueError(f"line {lineno}: expected the node count, got {raw!r}")
            try:
                n_nodes = int(fields[0])
            except ValueError:
                raise ValueError(f"line {lineno}: bad node count {fields[0]!r}") from None
            if n_nodes < 1:
                raise ValueError(f"line {lineno}: node count must be positive")
            continue
        if len(fields) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'u v [w]', got {raw!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
            w = float(fields[2]) if len(fields) == 3 else 1.0
        except ValueError:
            raise ValueError(f"line {lineno}: malformed edge {raw!r}") from None
        edges.append((u, v, w))
    if n_nodes is None:
        raise ValueError("empty graph document")
    try:
        return Graph(n_nodes, tuple(edges))
    except ValueError as exc:
        raise ValueError(f"invalid graph: {exc}") from None


def format_graph(graph: Graph) -> str:
    """Inverse of parse_graph."""
    lines = [str(graph.n_nodes)]
    lines += [f"{u} {v} {w!r}" for u, v, w in graph.edges]
    return "\n".join(lines) + "\n"


def random_graph(
    n_nodes: int,
    edge_prob: float,
    seed: int | np.random.Generator,
    weight_range: tuple[float, float] | None = None,
) -> Graph:
    """Connected random graph: a random spanning tree plus G(n, p) extras.

    Unit weights unless weight_range gives uniform bounds.
    """
    if n_nodes < 2:
        raise ValueError("need at least 2 nodes")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError(f"edge_prob must be a probability, got {edge_prob}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    order = rng.permutation(n_nodes)
    present = set()
    for k in range(1, n_nodes):
        a = int(order[k])
        b = int(order[rng.integers(0, k)])
        present.add((min(a, b), max(a, b)))
    for u in range(n_nodes):
        for v in range(u + 1, n_nodes):
            if (u, v) not in present and rng.random() < edge_prob:
                present.add((u, v))
    edges = []
    for u, v in sorted(present):
        w = 1.0 if weight_range is None else float(rng.uniform(*weight_range))
        edges.append((u, v, w))
    return Graph(n_nodes, tuple(edges))
