"""Weighted graphs, standard families and composition operators.

Vertex indexing conventions:

* ``join(G, H)``: vertices of ``G`` keep ``0..n_G-1``, vertices of ``H`` are
  offset by ``n_G``.
* ``cartesian(G, H)``: vertex ``(g, h)`` maps to ``g * n_H + h``.
* ``hypercube(n)``: vertex index is the binary value of the bit string read
  left to right, so the first coordinate is the most significant bit.
* ``hamming(q, n)``: the same, in base ``q``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

MAX_VERTICES = 4096

STAR = "⋆"


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected graph stored as a dense symmetric weight table.

    Off-diagonal entry ``(i, j)`` is the edge weight and diagonal entry
    ``(i, i)`` the self-loop weight; zero means absent. The table is
    read-only once constructed.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] == 0:
            raise ValueError("weights must be a non-empty square table")
        if w.shape[0] > MAX_VERTICES:
            raise ValueError(f"at most {MAX_VERTICES} vertices are supported")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if not np.array_equal(w, w.T):
            raise ValueError("weights must be exactly symmetric")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def loops(self) -> np.ndarray:
        return np.diag(self.weights)

    def is_plain(self) -> bool:
        """True when every edge has weight 0 or 1 and there are no loops."""
        w = self.weights
        off = w[~np.eye(self.n, dtype=bool)]
        return bool(np.all(np.diag(w) == 0) and np.all((off == 0) | (off == 1)))

    def edges(self) -> list[tuple[int, int, float]]:
        """Nonzero entries ``(i, j, w)`` with ``i <= j``, sorted by ``(i, j)``."""
        iu, ju = np.triu_indices(self.n)
        vals = self.weights[iu, ju]
        keep = vals != 0
        return [(int(i), int(j), float(v)) for i, j, v in zip(iu[keep], ju[keep], vals[keep])]

    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, 1)))

    def scaled(self, factor: float) -> WeightedGraph:
        return WeightedGraph(factor * self.weights)

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.n, self.weights.tobytes()))

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, edges={self.edge_count()})"


def from_matrix(matrix, symmetrize: bool = False) -> WeightedGraph:
    """Wrap a square array; ``symmetrize`` mirrors the upper triangle."""
    w = np.array(matrix, dtype=float)
    if symmetrize and w.ndim == 2:
        upper = np.triu(w)
        w = upper + np.triu(w, 1).T
    return WeightedGraph(w)


def build(n: int, entries: Iterable[Sequence[float]]) -> WeightedGraph:
    """Build a graph from ``(i, j, weight)`` triples, mirroring each to ``(j, i)``."""
    if int(n) != n or n < 1:
        raise ValueError("vertex count must be a positive integer")
    n = int(n)
    if n > MAX_VERTICES:
        raise ValueError(f"at most {MAX_VERTICES} vertices are supported")
    w = np.zeros((n, n))
    seen: set[tuple[int, int]] = set()
    for entry in entries:
        if len(entry) != 3:
            raise ValueError(f"entry must be (i, j, weight), got {entry!r}")
        i, j, value = entry
        if int(i) != i or int(j) != j:
            raise ValueError(f"vertex indices must be integers, got {entry!r}")
        i, j = int(i), int(j)
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"entry ({i}, {j}) out of range for n={n}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ValueError(f"duplicate entry {key}")
        seen.add(key)
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"non-finite weight at {key}")
        w[i, j] = w[j, i] = value
    return WeightedGraph(w)


# -- standard families -------------------------------------------------------


def _positive(name: str, value: int, minimum: int = 1) -> int:
    if int(value) != value or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def complete(n: int) -> WeightedGraph:
    n = _positive("n", n)
    return WeightedGraph(np.ones((n, n)) - np.eye(n))


def empty(n: int) -> WeightedGraph:
    n = _positive("n", n)
    return WeightedGraph(np.zeros((n, n)))


def cycle(n: int) -> WeightedGraph:
    n = _positive("n", n, 3)
    w = np.zeros((n, n))
    idx = np.arange(n)
    w[idx, (idx + 1) % n] = 1.0
    w[(idx + 1) % n, idx] = 1.0
    return WeightedGraph(w)


def path(n: int) -> WeightedGraph:
    n = _positive("n", n)
    w = np.zeros((n, n))
    idx = np.arange(n - 1)
    w[idx, idx + 1] = w[idx + 1, idx] = 1.0
    return WeightedGraph(w)


def hamming(q: int, n: int) -> WeightedGraph:
    """H(q, n): words over ``{0..q-1}`` of length ``n`` adjacent at Hamming distance 1."""
    q = _positive("q", q, 2)
    n = _positive("n", n)
    if q**n > MAX_VERTICES:
        raise ValueError(f"H({q},{n}) exceeds {MAX_VERTICES} vertices")
    words = np.array(np.unravel_index(np.arange(q**n), (q,) * n)).T
    dist = (words[:, None, :] != words[None, :, :]).sum(axis=2)
    return WeightedGraph((dist == 1).astype(float))


def hypercube(n: int) -> WeightedGraph:
    return hamming(2, n)


def circulant_regular(n: int, k: int) -> WeightedGraph:
    """A k-regular graph on n vertices (circulant; needs ``n*k`` even, ``k < n``)."""
    n = _positive("n", n)
    if int(k) != k or k < 0 or k >= n or (n * k) % 2:
        raise ValueError(f"no circulant {k}-regular graph on {n} vertices")
    w = np.zeros((n, n))
    idx = np.arange(n)
    for step in range(1, k // 2 + 1):
        w[idx, (idx + step) % n] = w[(idx + step) % n, idx] = 1.0
    if k % 2:
        w[idx, (idx + n // 2) % n] = 1.0
    return WeightedGraph(w)


FAMILIES = {
    "complete": complete,
    "empty": empty,
    "cycle": cycle,
    "path": path,
    "hypercube": hypercube,
    "hamming": hamming,
}


def standard(family: str, *params: int) -> WeightedGraph:
    """Unweighted member of a named family, e.g. ``standard("hamming", 3, 2)``."""
    try:
        ctor = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}") from None
    try:
        return ctor(*params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {family}: {params!r}") from exc


# -- operators -----------------------------------------------------------------


def uniform_weighting(graph: WeightedGraph, loop: float, edge: float) -> WeightedGraph:
    """Return ``loop * I + edge * A`` for a loopless graph."""
    if np.any(graph.loops != 0):
        raise ValueError("uniform weighting needs a graph without self-loops")
    return WeightedGraph(loop * np.eye(graph.n) + edge * graph.weights)


def join(g: WeightedGraph, h: WeightedGraph, rho: float = 1.0) -> WeightedGraph:
    """Disjoint union of ``g`` and ``h`` plus every cross edge with weight ``rho``."""
    cross = np.full((g.n, h.n), float(rho))
    return WeightedGraph(np.block([[g.weights, cross], [cross.T, h.weights]]))


def cartesian(g: WeightedGraph, h: WeightedGraph) -> WeightedGraph:
    if g.n * h.n > MAX_VERTICES:
        raise ValueError(f"product exceeds {MAX_VERTICES} vertices")
    w = np.kron(np.eye(g.n), h.weights) + np.kron(g.weights, np.eye(h.n))
    return WeightedGraph(w)


def cartesian_power(factors: Sequence[WeightedGraph]) -> WeightedGraph:
    if not factors:
        raise ValueError("need at least one factor")
    return reduce(cartesian, factors)


def apex_pair(b: int, loop: float, edge: float) -> WeightedGraph:
    """The two-vertex graph with loops ``loop``; joined by ``edge`` only when ``b == 1``."""
    if b not in (0, 1):
        raise ValueError(f"connectivity flag b must be 0 or 1, got {b!r}")
    base = complete(2) if b == 1 else empty(2)
    return uniform_weighting(base, loop, edge)


def double_cone(b: int, loop: float, edge: float, graph: WeightedGraph) -> WeightedGraph:
    """Apex pair (vertices 0 and 1) joined with unit weight to every vertex of ``graph``."""
    return join(apex_pair(b, loop, edge), graph, 1.0)


def regularity(graph: WeightedGraph):
    """Common degree of the graph, or ``None`` if it is not regular.

    Plain graphs report the neighbour count as an ``int``. Weighted graphs
    report the common off-diagonal row sum as a ``float``.
    """
    off = graph.weights - np.diag(graph.loops)
    sums = off.sum(axis=1)
    if graph.is_plain():
        degrees = np.count_nonzero(off, axis=1)
        return int(degrees[0]) if np.all(degrees == degrees[0]) else None
    if np.allclose(sums, sums[0], rtol=1e-12, atol=1e-12):
        return float(sums[0])
    return None


def half_join(
    mu: float, eta: float, kappa: float, tau: float, rho: float, eps: float, graph: WeightedGraph
) -> WeightedGraph:
    """Two apexes over two copies of a regular graph, each apex wired to one copy.

    Layout: apexes 0 and 1 (loops ``mu``, mutual edge ``eta``), copy one on
    ``2..n+1`` and copy two on ``n+2..2n+1``, each weighted ``kappa*I + tau*A``,
    with ``rho`` between the copies. Apex 0 reaches copy one and apex 1 copy
    two, both with weight ``eps``.
    """
    if not graph.is_plain() or regularity(graph) is None:
        raise ValueError("half-join needs a plain regular graph")
    n = graph.n
    block = kappa * np.eye(n) + tau * graph.weights
    w = np.zeros((2 + 2 * n, 2 + 2 * n))
    w[0, 0] = w[1, 1] = mu
    w[0, 1] = w[1, 0] = eta
    one, two = slice(2, 2 + n), slice(2 + n, 2 + 2 * n)
    w[0, one] = w[one, 0] = eps
    w[1, two] = w[two, 1] = eps
    w[one, one] = block
    w[two, two] = block
    w[one, two] = w[two, one] = rho
    return WeightedGraph(w)


def path_hypercubic(n: int) -> WeightedGraph:
    """Path on n vertices with edge ``(j-1, j)`` weighted ``sqrt(j * (n - j))``."""
    n = _positive("n", n, 2)
    j = np.arange(1, n)
    w = np.zeros((n, n))
    w[j - 1, j] = w[j, j - 1] = np.sqrt(j * (n - j))
    return WeightedGraph(w)


def subcube_hypercube(k: int, l: int, m: int) -> WeightedGraph:
    """n-cube with unit weight on the first k dimensions, 1/2 on the last m, none between."""
    for name, value in (("k", k), ("l", l), ("m", m)):
        if int(value) != value or value < 0:
            raise ValueError(f"block size {name} must be a nonnegative integer")
    n = k + l + m
    if n < 1:
        raise ValueError("k + l + m must be at least 1")
    if 2**n > MAX_VERTICES:
        raise ValueError(f"2^{n} exceeds {MAX_VERTICES} vertices")
    w = np.zeros((2**n, 2**n))
    if k:
        w += np.kron(hypercube(k).weights, np.eye(2 ** (n - k)))
    if m:
        w += 0.5 * np.kron(np.eye(2 ** (k + l)), hypercube(m).weights)
    return WeightedGraph(w)


def permute(graph: WeightedGraph, perm: Sequence[int]) -> WeightedGraph:
    """Relabel vertices so that old vertex ``i`` becomes ``perm[i]``."""
    perm = np.asarray(perm, dtype=int)
    if sorted(perm.tolist()) != list(range(graph.n)):
        raise ValueError("perm must be a permutation of the vertex set")
    inv = np.empty_like(perm)
    inv[perm] = np.arange(graph.n)
    return WeightedGraph(graph.weights[np.ix_(inv, inv)])


# -- subcubes ------------------------------------------------------------------

_PATTERN = re.compile(r"^[01]*\**$")


@dataclass(frozen=True)
class SubcubeSpec:
    """Subcube of the n-cube given as a pattern over ``0``, ``1`` and ``*``.

    Fixed coordinates must precede free ones. ``blocks`` is ``(k, l, m)``
    when the pattern has the canonical form ``1^k 0^l *^m``.
    """

    pattern: str

    def __post_init__(self):
        p = self.pattern.replace(STAR, "*")
        if not p:
            raise ValueError("empty subcube pattern")
        if set(p) - set("01*"):
            raise ValueError(f"pattern {self.pattern!r} may only contain 0, 1 and *")
        if not _PATTERN.match(p):
            raise ValueError(f"pattern {self.pattern!r}: free coordinates must follow fixed ones")
        object.__setattr__(self, "pattern", p)

    @property
    def dimension(self) -> int:
        return len(self.pattern)

    @property
    def fixed(self) -> str:
        return self.pattern.rstrip("*")

    @property
    def free(self) -> int:
        return len(self.pattern) - len(self.fixed)

    @property
    def blocks(self) -> tuple[int, int, int] | None:
        m = re.fullmatch(r"(1*)(0*)(\**)", self.pattern)
        if m is None:
            return None
        return len(m.group(1)), len(m.group(2)), len(m.group(3))

    @classmethod
    def canonical(cls, k: int, l: int, m: int) -> SubcubeSpec:
        return cls("1" * k + "0" * l + "*" * m)

    def __str__(self):
        return self.pattern
