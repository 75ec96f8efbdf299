"""Quantum states, evolution, fidelity scans and transfer certificates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .graphs import SubcubeSpec
from .spectral import Spectrum

NORM_TOL = 1e-10
DEFAULT_TOL = 1e-9

Descriptor = Union[int, str, SubcubeSpec, np.ndarray]


def basis_state(n: int, i: int) -> np.ndarray:
    if int(n) != n or n < 1:
        raise ValueError("dimension must be a positive integer")
    if int(i) != i or not 0 <= i < n:
        raise IndexError(f"vertex {i!r} out of range for n={n}")
    state = np.zeros(int(n), dtype=complex)
    state[int(i)] = 1.0
    return state


def subcube_normal_state(spec: SubcubeSpec | str) -> np.ndarray:
    """Fixed bits on the leading coordinates, normal-form superposition on the free ones.

    A vertex matching the pattern with ``w`` ones among its free bits gets
    amplitude ``(-i)^w / sqrt(2^m)``.
    """
    if not isinstance(spec, SubcubeSpec):
        spec = SubcubeSpec(spec)
    m = spec.free
    head = int(spec.fixed, 2) if spec.fixed else 0
    tail = np.arange(2**m)
    weight = np.array([bin(x).count("1") for x in tail])
    state = np.zeros(2**spec.dimension, dtype=complex)
    state[(head << m) + tail] = (-1j) ** weight / math.sqrt(2**m)
    return state


def check_state(psi, n: int | None = None) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError("state must be a vector")
    if n is not None and psi.shape[0] != n:
        raise ValueError(f"state has dimension {psi.shape[0]}, expected {n}")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1) > NORM_TOL:
        raise ValueError(f"state is not normalized (|psi|^2 = {norm2!r})")
    return psi


def resolve_state(desc: Descriptor, n: int) -> np.ndarray:
    """Vertex index, subcube pattern or explicit vector to a state of dimension ``n``."""
    if isinstance(desc, (int, np.integer)) and not isinstance(desc, bool):
        return basis_state(n, int(desc))
    if isinstance(desc, str):
        token = desc.strip()
        if token.isdigit():
            return basis_state(n, int(token))
        desc = SubcubeSpec(token)
    if isinstance(desc, SubcubeSpec):
        if 2**desc.dimension != n:
            raise ValueError(f"pattern {desc} has dimension {desc.dimension}, graph has {n} vertices")
        return subcube_normal_state(desc)
    return check_state(desc, n)


def describe(desc: Descriptor):
    """JSON-friendly form of a state descriptor."""
    if isinstance(desc, (int, np.integer)):
        return int(desc)
    if isinstance(desc, SubcubeSpec):
        return desc.pattern
    if isinstance(desc, str):
        token = desc.strip()
        return int(token) if token.isdigit() else SubcubeSpec(token).pattern
    return "vector"


def _spectral_coords(spectrum: Spectrum, psi: np.ndarray) -> np.ndarray:
    return spectrum.eigenvectors.T @ psi


def evolve(spectrum: Spectrum, psi, t: float) -> np.ndarray:
    """``exp(-itW) psi``."""
    psi = check_state(psi, spectrum.n)
    u = spectrum.eigenvectors
    return u @ (np.exp(-1j * t * spectrum.eigenvalues) * _spectral_coords(spectrum, psi))


def transfer_amplitude(spectrum: Spectrum, source, target, t):
    """``<target| exp(-itW) |source>``, vectorized over ``t``."""
    src = resolve_state(source, spectrum.n)
    dst = resolve_state(target, spectrum.n)
    u = spectrum.eigenvectors
    weights = np.conj(u.T @ dst) * (u.T @ src)
    t_arr = np.asarray(t, dtype=float)
    out = np.exp(-1j * np.multiply.outer(t_arr, spectrum.eigenvalues)) @ weights
    return complex(out) if t_arr.ndim == 0 else out


def fidelity(spectrum: Spectrum, source, target, t):
    """Squared modulus of the transfer amplitude."""
    return np.abs(transfer_amplitude(spectrum, source, target, t)) ** 2


def time_grid(t_max: float, steps: int) -> np.ndarray:
    """``steps`` points ``j * t_max / steps`` for ``j = 0..steps-1``."""
    if not math.isfinite(t_max) or t_max <= 0:
        raise ValueError("t_max must be positive and finite")
    if int(steps) != steps or steps < 2:
        raise ValueError("steps must be an integer >= 2")
    return np.arange(int(steps)) * (t_max / steps)


@dataclass(frozen=True, eq=False)
class ScanResult:
    t_best: float
    f_best: float
    times: np.ndarray
    amplitudes: np.ndarray

    @property
    def fidelities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def rows(self):
        for t, amp, f in zip(self.times, self.amplitudes, self.fidelities):
            yield float(t), float(amp.real), float(amp.imag), float(f)


def scan(spectrum: Spectrum, source, target, t_max: float, steps: int) -> ScanResult:
    """Fidelity on a uniform time grid; the best point is the earliest maximum."""
    times = time_grid(t_max, steps)
    amps = transfer_amplitude(spectrum, source, target, times)
    fids = np.abs(amps) ** 2
    j = int(np.argmax(fids))
    return ScanResult(float(times[j]), float(fids[j]), times, amps)


@dataclass(frozen=True)
class PSTCertificate:
    source: object
    target: object
    time: float
    fidelity: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.fidelity >= 1 - self.tolerance

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "time": float(self.time),
            "fidelity": float(self.fidelity),
            "tolerance": float(self.tolerance),
            "verdict": self.verdict,
        }


def certify(spectrum: Spectrum, source, target, t: float, tol: float = DEFAULT_TOL) -> PSTCertificate:
    """Evaluate fidelity at ``t`` and pass iff it is at least ``1 - tol``."""
    if not 0 < tol < 1:
        raise ValueError("tolerance must lie in (0, 1)")
    if not math.isfinite(t):
        raise ValueError("time must be finite")
    f = float(fidelity(spectrum, source, target, t))
    return PSTCertificate(describe(source), describe(target), float(t), f, float(tol))
