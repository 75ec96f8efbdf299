"""Weight synthesis for perfect state transfer, and the half-join probe."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import graphs as gr
from .graphs import SubcubeSpec, WeightedGraph
from .spectral import (
    HalfJoinParams,
    amplitude,
    eigendecompose,
    half_join_amplitude_closed_form,
)
from .walk import basis_state, certify, subcube_normal_state, time_grid

FACTOR_TOL = 1e-9


@dataclass(frozen=True)
class DoubleConeWeights:
    """Loop/edge weights putting PST between the apexes of a double cone.

    The base graph is any ``k``-regular graph on ``n`` vertices; ``b`` says
    whether the apexes share an edge. With ``s = sqrt(8n / (q^2 - p^2))``
    the weights are ``eta = s/4`` and ``mu = p*s + k - b*eta``, which makes
    ``delta / (4 eta) = p`` and ``Delta / (4 eta) = q``.
    """

    n: int
    k: int
    b: int
    p: int
    q: int

    def __post_init__(self):
        if self.b not in (0, 1):
            raise ValueError("b must be 0 or 1")
        if self.n < 1 or not 0 <= self.k < self.n or (self.n * self.k) % 2:
            raise ValueError(f"no {self.k}-regular graph on {self.n} vertices")
        if not 1 <= self.p < self.q:
            raise ValueError(f"need 1 <= p < q, got p={self.p}, q={self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"p={self.p} and q={self.q} are not coprime")
        if int(self.p % 2 == self.q % 2) != self.b:
            raise ValueError(
                f"parity: p={self.p}, q={self.q} {'share' if self.p % 2 == self.q % 2 else 'differ in'} "
                f"parity but b={self.b} requires they {'share' if self.b else 'differ'}"
            )

    @property
    def unit(self) -> float:
        return math.sqrt(8 * self.n / (self.q**2 - self.p**2))

    @property
    def delta(self) -> float:
        return self.p * self.unit

    @property
    def big_delta(self) -> float:
        return self.q * self.unit

    @property
    def eta(self) -> float:
        return self.unit / 4

    @property
    def mu(self) -> float:
        return self.delta + self.k - self.b * self.eta

    @property
    def t_star(self) -> float:
        return math.pi / (2 * self.eta)

    def graph(self, base: WeightedGraph) -> WeightedGraph:
        if base.n != self.n or gr.regularity(base) != self.k:
            raise ValueError(f"base graph must be {self.k}-regular on {self.n} vertices")
        return gr.double_cone(self.b, self.mu, self.eta, base)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "b": self.b,
            "p": self.p,
            "q": self.q,
            "delta": self.delta,
            "Delta": self.big_delta,
            "eta": self.eta,
            "mu": self.mu,
        }


DEFAULT_PQ = {1: (1, 3), 0: (1, 2)}


def double_cone_weights(n: int, k: int, b: int, p: int | None = None, q: int | None = None) -> DoubleConeWeights:
    if (p is None) != (q is None):
        raise ValueError("give both p and q or neither")
    if p is None:
        if b not in DEFAULT_PQ:
            raise ValueError("b must be 0 or 1")
        p, q = DEFAULT_PQ[b]
    return DoubleConeWeights(int(n), int(k), int(b), int(p), int(q))


# -- Cartesian composition ------------------------------------------------------


@dataclass(frozen=True)
class Factor:
    graph: WeightedGraph
    source: int
    target: int
    native_time: float


@dataclass(frozen=True)
class FactorPlan:
    factors: tuple[Factor, ...]
    t_star: float

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("plan needs at least one factor")
        if not (math.isfinite(self.t_star) and self.t_star > 0):
            raise ValueError("t_star must be positive")

    @property
    def scales(self) -> list[float]:
        return [f.native_time / self.t_star for f in self.factors]


@dataclass(frozen=True)
class ProductTransfer:
    graph: WeightedGraph
    source: int
    target: int
    t_star: float
    plan: FactorPlan | None = field(default=None, repr=False)


def mixed_radix(digits: Sequence[int], sizes: Sequence[int]) -> int:
    index = 0
    for d, size in zip(digits, sizes):
        if not 0 <= d < size:
            raise IndexError(f"digit {d} out of range for size {size}")
        index = index * size + int(d)
    return index


def cartesian_compose(plan: FactorPlan) -> ProductTransfer:
    """Product of the factors, each scaled so its native time lands on ``plan.t_star``."""
    for i, f in enumerate(plan.factors):
        cert = certify(eigendecompose(f.graph), f.source, f.target, f.native_time, FACTOR_TOL)
        if not cert.passed:
            raise ValueError(
                f"factor {i} is not certified {f.source}->{f.target} at t={f.native_time} "
                f"(fidelity {cert.fidelity:.3g})"
            )
    scaled = [f.graph.scaled(s) for f, s in zip(plan.factors, plan.scales)]
    sizes = [f.graph.n for f in plan.factors]
    return ProductTransfer(
        gr.cartesian_power(scaled),
        mixed_radix([f.source for f in plan.factors], sizes),
        mixed_radix([f.target for f in plan.factors], sizes),
        plan.t_star,
        plan,
    )


def weighted_complete(q: int, first: int, second: int) -> tuple[WeightedGraph, float]:
    """K_q weighted for PST from ``first`` to ``second``; returns the graph and its PST time."""
    if q < 2:
        raise ValueError("q must be at least 2")
    if first == second or not (0 <= first < q and 0 <= second < q):
        raise ValueError("need two distinct vertices of K_q")
    if q == 2:
        g, t = gr.complete(2), math.pi / 2
    else:
        w = double_cone_weights(q - 2, q - 3, 1, 1, 3)
        g, t = w.graph(gr.complete(q - 2)), w.t_star
    rest = [v for v in range(q) if v not in (first, second)]
    return gr.permute(g, [first, second, *rest]), t


def _parse_word(word, q: int, n: int) -> list[int]:
    if isinstance(word, str):
        token = word.strip()
        parts = token.split(",") if "," in token else list(token)
        word = [int(x) for x in parts]
    word = [int(x) for x in word]
    if len(word) != n or any(not 0 <= x < q for x in word):
        raise ValueError(f"{word!r} is not a word of length {n} over 0..{q - 1}")
    return word


def hamming_universal(q: int, n: int, a, b, t_star: float) -> ProductTransfer:
    """Weighted H(q, n) with PST from word ``a`` to word ``b`` at ``t_star``.

    Coordinates where ``a`` and ``b`` differ use a weighted K_q with PST
    between the two letters. Equal coordinates reuse the same construction
    toward any other letter and rely on the return to the start at twice the
    transfer time.
    """
    if int(q) != q or q < 2 or int(n) != n or n < 1:
        raise ValueError("need q >= 2 and n >= 1")
    a, b = _parse_word(a, q, n), _parse_word(b, q, n)
    if a == b:
        raise ValueError("source and target words must differ")
    factors = []
    for aj, bj in zip(a, b):
        if aj != bj:
            g, t = weighted_complete(q, aj, bj)
            factors.append(Factor(g, aj, bj, t))
        else:
            g, t = weighted_complete(q, aj, (aj + 1) % q)
            factors.append(Factor(g, aj, aj, 2 * t))
    return cartesian_compose(FactorPlan(tuple(factors), t_star))


# -- hypercube subcubes -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SubcubeTransfer:
    graph: WeightedGraph
    source: np.ndarray
    target: np.ndarray
    pattern: SubcubeSpec
    t_star: float = math.pi / 2


def hypercube_subcube_transfer(k: int, l: int, m: int) -> SubcubeTransfer:
    """Weighted cube moving ``|0...0>`` onto the normal-form state of ``1^k 0^l *^m`` at pi/2."""
    g = gr.subcube_hypercube(k, l, m)
    spec = SubcubeSpec.canonical(k, l, m)
    return SubcubeTransfer(g, basis_state(g.n, 0), subcube_normal_state(spec), spec)


# -- half-join probe ---------------------------------------------------------------

WEIGHT_NAMES = ("mu", "eta", "kappa", "tau", "rho", "eps")


def sample_half_join_weights(
    count: int, seed: int, fixed: Mapping[str, float] | None = None
) -> list[dict[str, float]]:
    """Seeded weights: mu, eta, kappa, tau in [-3, 3] (eta nonzero); rho, eps in (0, 3]."""
    if count < 1:
        raise ValueError("need at least one sample")
    fixed = dict(fixed or {})
    unknown = set(fixed) - set(WEIGHT_NAMES)
    if unknown:
        raise ValueError(f"unknown weight names {sorted(unknown)}")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        mu, eta, kappa, tau = rng.uniform(-3.0, 3.0, size=4)
        rho, eps = 3.0 - rng.uniform(0.0, 3.0, size=2)
        if eta == 0:
            continue
        draw = dict(zip(WEIGHT_NAMES, map(float, (mu, eta, kappa, tau, rho, eps))))
        draw.update(fixed)
        out.append(draw)
    return out


@dataclass
class ProbeReport:
    max_fidelity: float
    argmax_sample: int
    argmax_time: float
    argmax_weights: dict
    evaluations: list[int]
    sample_max: list[float]
    oracle_deviation: float | None = None

    def to_dict(self) -> dict:
        out = {
            "max_fidelity": self.max_fidelity,
            "argmax_sample": self.argmax_sample,
            "argmax_time": self.argmax_time,
            "argmax_weights": self.argmax_weights,
            "evaluations": self.evaluations,
            "sample_max": self.sample_max,
        }
        if self.oracle_deviation is not None:
            out["oracle_deviation"] = self.oracle_deviation
        return out


def halfjoin_no_pst_probe(
    graph: WeightedGraph,
    samples: Sequence[Mapping[str, float]],
    t_max: float,
    steps: int,
    oracle: bool = False,
) -> ProbeReport:
    """Largest apex-to-apex fidelity over weight samples and a time grid.

    A low maximum is evidence, not proof, that no sampled weights give PST.
    With ``oracle=True`` each sample is also evaluated by brute-force
    eigendecomposition and the largest disagreement is reported.
    """
    k = gr.regularity(graph)
    if not graph.is_plain() or k is None:
        raise ValueError("probe needs a plain regular base graph")
    if not samples:
        raise ValueError("need at least one weight sample")
    times = time_grid(t_max, steps)
    best = (-1.0, 0, 0.0)
    sample_max, evaluations = [], []
    deviation = 0.0
    for i, w in enumerate(samples):
        if w["eps"] == 0:
            raise ValueError(f"sample {i} has eps = 0")
        params = HalfJoinParams(*(w[name] for name in WEIGHT_NAMES), n=graph.n, k=k)
        amps = half_join_amplitude_closed_form(params, times)
        fids = np.abs(amps) ** 2
        j = int(np.argmax(fids))
        sample_max.append(float(fids[j]))
        evaluations.append(int(times.size))
        if fids[j] > best[0]:
            best = (float(fids[j]), i, float(times[j]))
        if oracle:
            hj = gr.half_join(*(w[name] for name in WEIGHT_NAMES), graph)
            brute = amplitude(eigendecompose(hj), 0, 1, times)
            deviation = max(deviation, float(np.max(np.abs(brute - amps))))
    f, i, t = best
    return ProbeReport(
        max_fidelity=f,
        argmax_sample=i,
        argmax_time=t,
        argmax_weights={name: float(samples[i][name]) for name in WEIGHT_NAMES},
        evaluations=evaluations,
        sample_max=sample_max,
        oracle_deviation=deviation if oracle else None,
    )
