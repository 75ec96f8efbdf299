"""Symmetric eigendecomposition, spectral propagator and closed-form amplitudes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graphs import WeightedGraph, regularity

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Orthonormal eigensystem of a weight table.

    ``eigenvectors[:, j]`` is the unit eigenvector for ``eigenvalues[j]``;
    eigenvalues are nondecreasing. ``scale`` is the largest absolute weight.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    scale: float

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.T

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "eigenvectors": [[float(x) for x in col] for col in self.eigenvectors.T],
        }


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Fixed tournament schedule: every pair (p < q) exactly once, disjoint within a round."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        order = np.argsort(ps, kind="stable")
        rounds.append((np.array(ps)[order], np.array(qs)[order]))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigh(
    matrix: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi for a real symmetric matrix.

    Each sweep visits every off-diagonal pair once in a fixed round-robin
    order; rotations within a round act on disjoint index pairs and are
    applied together. Stops once the off-diagonal Frobenius norm is at most
    ``tol * ||A||_F``. Returns unsorted ``(eigenvalues, eigenvectors)``.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    target = tol * float(np.linalg.norm(a))
    rounds = _round_robin(n) if n > 1 else ()
    for _ in range(max_sweeps + 1):
        if _off_norm(a) <= target:
            return np.diag(a).copy(), v
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            app, aqq = a[p, p], a[q, q]
            with np.errstate(over="ignore"):
                # a huge tau means a negligible rotation: t underflows to 0
                tau = (aqq - app) / (2.0 * apq)
            sign = np.where(tau >= 0, 1.0, -1.0)
            t = sign / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.hypot(1.0, t)
            s = t * c

            colp, colq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * colp - s * colq
            a[:, q] = s * colp + c * colq
            rowp, rowq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rowp - s[:, None] * rowq
            a[q, :] = s[:, None] * rowp + c[:, None] * rowq
            a[p, p] = app - t * apq
            a[q, q] = aqq + t * apq
            a[p, q] = a[q, p] = 0.0

            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
        a = 0.5 * (a + a.T)
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def eigendecompose(graph: WeightedGraph | np.ndarray) -> Spectrum:
    """Spectrum of a graph, sorted ascending with a fixed eigenvector sign.

    The largest-magnitude component of every eigenvector is made positive
    (first index wins ties), so results are reproducible run to run.
    """
    w = graph.weights if isinstance(graph, WeightedGraph) else np.asarray(graph, dtype=float)
    vals, vecs = jacobi_eigh(w)
    order = np.argsort(vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    lead = np.argmax(np.abs(vecs), axis=0)
    signs = np.where(vecs[lead, np.arange(vecs.shape[1])] < 0, -1.0, 1.0)
    vecs = vecs * signs
    vals.setflags(write=False)
    vecs.setflags(write=False)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    return Spectrum(vals, vecs, scale)


def _check_vertex(spectrum: Spectrum, v: int) -> int:
    if int(v) != v or not 0 <= v < spectrum.n:
        raise IndexError(f"vertex {v!r} out of range for n={spectrum.n}")
    return int(v)


def amplitude(spectrum: Spectrum, a: int, b: int, t):
    """``<b| exp(-itW) |a>``; ``t`` may be a scalar or an array of times."""
    a = _check_vertex(spectrum, a)
    b = _check_vertex(spectrum, b)
    u = spectrum.eigenvectors
    weights = u[b] * u[a]
    t_arr = np.asarray(t, dtype=float)
    out = np.exp(-1j * np.multiply.outer(t_arr, spectrum.eigenvalues)) @ weights
    return complex(out) if t_arr.ndim == 0 else out


def propagator(spectrum: Spectrum, t: float) -> np.ndarray:
    """Full unitary ``exp(-itW)``."""
    u = spectrum.eigenvectors
    return (u * np.exp(-1j * t * spectrum.eigenvalues)) @ u.T


# -- closed forms ----------------------------------------------------------


def _rel(lhs: float, rhs: float, scale: float) -> float:
    scale = max(scale, abs(lhs), abs(rhs), np.finfo(float).tiny)
    return abs(lhs - rhs) / scale


def _roots(delta: float, big_delta: float, gap: float, denom: float) -> tuple[float, float]:
    """``(delta +- big_delta) / denom`` given ``gap = big_delta**2 - delta**2`` exactly.

    The smaller root is formed from ``gap`` to avoid cancellation.
    """
    if delta >= 0:
        return (delta + big_delta) / denom, -gap / (denom * (delta + big_delta))
    return -gap / (denom * (delta - big_delta)), (delta - big_delta) / denom


@dataclass(frozen=True)
class JoinSpectrumParts:
    """Two-dimensional invariant block of the join of two uniformly weighted regular graphs.

    ``kappa1``, ``kappa2`` are the weighted degrees (loop + edge * degree) of
    the parts; the block's eigenvectors are ``(alpha * 1_{n1}, 1_{n2})``.
    """

    n1: int
    n2: int
    kappa1: float
    kappa2: float

    @property
    def delta(self) -> float:
        return self.kappa1 - self.kappa2

    @property
    def delta_hat(self) -> float:
        return self.kappa1 + self.kappa2

    @property
    def big_delta(self) -> float:
        return math.sqrt(self.delta**2 + 4 * self.n1 * self.n2)

    @property
    def alphas(self) -> tuple[float, float]:
        return _roots(self.delta, self.big_delta, 4 * self.n1 * self.n2, 2 * self.n1)

    @property
    def norms(self) -> tuple[float, float]:
        return tuple(self.n1 * x * x + self.n2 for x in self.alphas)

    @property
    def eigenvalues(self) -> tuple[float, float]:
        return tuple(self.n1 * x + self.kappa2 for x in self.alphas)

    def identity_residuals(self) -> dict[str, float]:
        """Relative residual of each algebraic identity the block satisfies."""
        ap, am = self.alphas
        lp, lm = self.norms
        n1, n2 = self.n1, self.n2
        big2 = self.big_delta**2
        lam_p, lam_m = self.eigenvalues
        return {
            "alpha_product": _rel(ap * am, -n2 / n1, abs(ap * am)),
            "alpha_sum": _rel(ap + am, self.delta / n1, abs(ap) + abs(am)),
            "norm_product": _rel(lp * lm, n2 / n1 * big2, lp * lm),
            "norm_sum": _rel(lp + lm, big2 / n1, lp + lm),
            "cross_plus": _rel(ap * ap * lm, n2 / n1 * lp, 0.0),
            "cross_minus": _rel(am * am * lp, n2 / n1 * lm, 0.0),
            "eigenvalue_plus": _rel(
                lam_p, (self.delta_hat + self.big_delta) / 2, abs(n1 * ap) + abs(self.kappa2)
            ),
            "eigenvalue_minus": _rel(
                lam_m, (self.delta_hat - self.big_delta) / 2, abs(n1 * am) + abs(self.kappa2)
            ),
        }


def join_amplitude_closed_form(
    base: WeightedGraph,
    loop1: float,
    edge1: float,
    kappa2: float,
    n2: int,
    a: int,
    b: int,
    t,
    spectrum: Spectrum | None = None,
):
    """Amplitude between two vertices of the first part of a weighted join.

    The first part is ``loop1 * I + edge1 * A`` for the plain regular graph
    ``base``; the second part enters only through its vertex count ``n2``
    and weighted degree ``kappa2``. Cross edges have unit weight.
    """
    k1 = regularity(base)
    if k1 is None or np.any(base.loops != 0):
        raise ValueError("first part must be a loopless regular graph")
    spectrum = spectrum if spectrum is not None else eigendecompose(base)
    n1 = base.n
    t = np.asarray(t, dtype=float)
    kappa1 = loop1 + edge1 * k1
    delta = kappa1 - kappa2
    big = math.sqrt(delta * delta + 4 * n1 * n2)
    inner = amplitude(spectrum, a, b, edge1 * t)
    base_term = np.exp(-1j * loop1 * t) * inner
    bracket = np.cos(big * t / 2) - 1j * (delta / big) * np.sin(big * t / 2)
    correction = np.exp(-1j * t * kappa1) / n1 * (np.exp(1j * t * delta / 2) * bracket - 1)
    out = base_term + correction
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class HalfJoinParams:
    """Weights of a half-join over a k-regular graph on n vertices.

    ``eps`` must be nonzero. The symmetric (``alpha``) and antisymmetric
    (``beta``) apex blocks have eigenvectors ``(x, +-x, 1_n, +-1_n)`` with
    coefficients ``x = (delta +- Delta) / (2 * eps)``.
    """

    mu: float
    eta: float
    kappa: float
    tau: float
    rho: float
    eps: float
    n: int
    k: int

    def __post_init__(self):
        if self.eps == 0:
            raise ValueError("eps must be nonzero (the apexes are otherwise disconnected)")

    @property
    def copy_degree(self) -> float:
        return self.kappa + self.tau * self.k

    def delta(self, branch: str) -> float:
        rn = self.rho * self.n
        if branch == "alpha":
            return (self.mu + self.eta) - (self.copy_degree + rn)
        if branch == "beta":
            return (self.mu - self.eta) - (self.copy_degree - rn)
        raise ValueError(f"branch must be 'alpha' or 'beta', got {branch!r}")

    def big_delta(self, branch: str) -> float:
        d = self.delta(branch)
        return math.sqrt(d * d + 4 * self.eps**2 * self.n)

    def coefficients(self, branch: str) -> tuple[float, float]:
        gap = 4 * self.eps**2 * self.n
        return _roots(self.delta(branch), self.big_delta(branch), gap, 2 * self.eps)

    def norms(self, branch: str) -> tuple[float, float]:
        return tuple(2 * x * x + 2 * self.n for x in self.coefficients(branch))

    def eigenvalues(self, branch: str) -> tuple[float, float]:
        shift = self.copy_degree + (self.rho * self.n if branch == "alpha" else -self.rho * self.n)
        d, big = self.delta(branch), self.big_delta(branch)
        return (shift + (d + big) / 2, shift + (d - big) / 2)

    def identity_residuals(self) -> dict[str, float]:
        out = {}
        n, e2 = self.n, self.eps**2
        for br in ("alpha", "beta"):
            d, big = self.delta(br), self.big_delta(br)
            xp, xm = self.coefficients(br)
            lp, lm = self.norms(br)
            out[f"{br}_discriminant"] = _rel(big * big, d * d + 4 * e2 * n, 0.0)
            out[f"{br}_norm_product"] = _rel(lp * lm, 4 * n * big * big / e2, 0.0)
            out[f"{br}_coefficient_product"] = _rel(xp * xm, -n, 0.0)
            out[f"{br}_cross_plus"] = _rel(xp * xp * lm, n * lp, 0.0)
            out[f"{br}_cross_minus"] = _rel(xm * xm * lp, n * lm, 0.0)
        return out


def half_join_amplitude_closed_form(params: HalfJoinParams, t):
    """Apex-0 to apex-1 amplitude on the half-join, vectorized over ``t``."""
    t = np.asarray(t, dtype=float)
    rn = params.rho * params.n

    def branch(name: str) -> np.ndarray:
        d, big = params.delta(name), params.big_delta(name)
        return np.exp(-1j * d * t / 2) * (np.cos(big * t / 2) - 1j * (d / big) * np.sin(big * t / 2))

    out = (
        np.exp(-1j * params.copy_degree * t)
        / 2
        * (np.exp(-1j * rn * t) * branch("alpha") - np.exp(1j * rn * t) * branch("beta"))
    )
    return complex(out) if out.ndim == 0 else out


QUARTER_PI = math.pi / 4
HALF_PI = math.pi / 2


def hypercube_amplitude_closed_form(n: int, a: int, b: int, t: float) -> complex:
    """Exact walk amplitude on the unweighted n-cube at ``t = pi/4`` or ``t = pi/2``.

    At ``pi/2`` the walk maps every vertex to its antipode with the global
    phase ``(-i)^n``.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    for v in (a, b):
        if int(v) != v or not 0 <= v < 2**n:
            raise IndexError(f"vertex {v!r} is not an {n}-bit index")
    dist = bin(int(a) ^ int(b)).count("1")
    if math.isclose(t, QUARTER_PI, rel_tol=1e-15):
        return (-1j) ** dist / math.sqrt(2**n)
    if math.isclose(t, HALF_PI, rel_tol=1e-15):
        return (-1j) ** n if dist == n else 0j
    raise ValueError("closed form only available at t = pi/4 and t = pi/2")
