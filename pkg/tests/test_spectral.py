import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from pstgraph import graphs as gr
from pstgraph.spectral import (
    HalfJoinParams,
    JoinSpectrumParts,
    amplitude,
    eigendecompose,
    half_join_amplitude_closed_form,
    hypercube_amplitude_closed_form,
    jacobi_eigh,
    join_amplitude_closed_form,
    propagator,
)


def random_symmetric(rng, n, scale=3.0):
    w = rng.uniform(-scale, scale, size=(n, n))
    return np.triu(w) + np.triu(w, 1).T


def check_spectrum(spectrum, w):
    u = spectrum.eigenvectors
    assert np.max(np.abs(u.T @ u - np.eye(len(w)))) <= 1e-10
    assert np.max(np.abs(spectrum.reconstruct() - w)) <= 1e-9 * max(1.0, spectrum.scale)
    assert np.all(np.diff(spectrum.eigenvalues) >= 0)


# -- eigendecomposition ----------------------------------------------------------


def test_complete_three():
    s = eigendecompose(gr.complete(3))
    np.testing.assert_allclose(s.eigenvalues, [-1, -1, 2], atol=1e-14)


def test_weighted_triangle_antisymmetric_eigenvalue():
    mu, eta = 0.75, 0.25
    s = eigendecompose(gr.double_cone(1, mu, eta, gr.complete(1)))
    assert np.min(np.abs(s.eigenvalues - (mu - eta))) < 1e-14
    # the remaining pair: 2 * (delta +- sqrt(delta^2 + 8)) / 4 with delta = mu + eta
    delta = mu + eta
    pair = sorted(2 * (delta + sgn * math.sqrt(delta**2 + 8)) / 4 for sgn in (1, -1))
    np.testing.assert_allclose(np.delete(s.eigenvalues, 1), pair, atol=1e-14)


def test_zero_graph():
    s = eigendecompose(gr.empty(5))
    np.testing.assert_array_equal(s.eigenvalues, np.zeros(5))
    np.testing.assert_array_equal(s.eigenvectors, np.eye(5))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 24), st.integers(0, 2**32 - 1))
def test_jacobi_matches_lapack(n, seed):
    rng = np.random.default_rng(seed)
    w = random_symmetric(rng, n)
    s = eigendecompose(w)
    check_spectrum(s, w)
    np.testing.assert_allclose(s.eigenvalues, np.linalg.eigvalsh(w), atol=1e-12 * max(1, np.abs(w).max()) * n)


@pytest.mark.parametrize(
    "graph",
    [gr.hypercube(4), gr.hamming(3, 3), gr.complete(7), gr.cycle(12), gr.subcube_hypercube(1, 2, 2)],
    ids=repr,
)
def test_degenerate_spectra(graph):
    s = eigendecompose(graph)
    check_spectrum(s, graph.weights)


def test_large_scale_entries():
    rng = np.random.default_rng(7)
    w = random_symmetric(rng, 10, scale=1e6)
    check_spectrum(eigendecompose(w), w)


def test_sign_convention_and_determinism():
    rng = np.random.default_rng(11)
    w = random_symmetric(rng, 9)
    s1, s2 = eigendecompose(w), eigendecompose(w.copy())
    np.testing.assert_array_equal(s1.eigenvalues, s2.eigenvalues)
    np.testing.assert_array_equal(s1.eigenvectors, s2.eigenvectors)
    u = s1.eigenvectors
    lead = np.argmax(np.abs(u), axis=0)
    assert np.all(u[lead, np.arange(9)] > 0)


def test_jacobi_nonconvergence_reported():
    rng = np.random.default_rng(1)
    w = random_symmetric(rng, 6)
    from pstgraph.spectral import ConvergenceError

    with pytest.raises(ConvergenceError):
        jacobi_eigh(w, tol=0.0, max_sweeps=1)


# -- amplitude -----------------------------------------------------------------------


def test_k2_amplitude():
    s = eigendecompose(gr.complete(2))
    t = np.linspace(-3, 7, 101)
    np.testing.assert_allclose(amplitude(s, 0, 1, t), -1j * np.sin(t), atol=1e-14)


def test_k3_amplitude():
    s = eigendecompose(gr.complete(3))
    t = np.linspace(0, 10, 201)
    expected = -(2 / 3) * 1j * np.exp(-1j * t / 2) * np.sin(3 * t / 2)
    np.testing.assert_allclose(amplitude(s, 0, 1, t), expected, atol=1e-14)


def test_identity_at_zero_and_index_errors():
    s = eigendecompose(gr.cycle(5))
    for a in range(5):
        assert amplitude(s, a, a, 0.0) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(IndexError):
        amplitude(s, 0, 5, 1.0)
    with pytest.raises(IndexError):
        amplitude(s, -1, 0, 1.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.floats(-20, 20))
def test_propagator_matches_expm(n, seed, t):
    rng = np.random.default_rng(seed)
    w = random_symmetric(rng, n)
    s = eigendecompose(w)
    u = propagator(s, t)
    np.testing.assert_allclose(u, expm(-1j * t * w), atol=1e-10)
    # unitarity, symmetry, time reversal
    np.testing.assert_allclose(np.sum(np.abs(u) ** 2, axis=0), 1, atol=1e-10)
    a, b = rng.integers(n, size=2)
    assert amplitude(s, a, b, t) == pytest.approx(amplitude(s, b, a, t), abs=1e-12)
    assert amplitude(s, a, b, -t) == pytest.approx(np.conj(amplitude(s, a, b, t)), abs=1e-12)
    assert abs(amplitude(s, a, b, t)) <= 1 + 1e-12


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["c5", "k4", "q3", "p4"]), st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 10))
def test_uniform_weighting_phase_and_time_scale(name, mu, eta, t):
    g = {"c5": gr.cycle(5), "k4": gr.complete(4), "q3": gr.hypercube(3), "p4": gr.path(4)}[name]
    plain = eigendecompose(g)
    weighted = eigendecompose(gr.uniform_weighting(g, mu, eta))
    for a, b in [(0, 0), (0, 1), (1, g.n - 1)]:
        lhs = amplitude(weighted, a, b, t)
        rhs = np.exp(-1j * mu * t) * amplitude(plain, a, b, eta * t)
        assert abs(lhs - rhs) <= 1e-12


def test_return_after_transfer():
    for g, t in [(gr.complete(2), math.pi / 2), (gr.hypercube(3), math.pi / 2), (gr.path_hypercubic(5), math.pi / 2)]:
        s = eigendecompose(g)
        b = g.n - 1
        assert abs(abs(amplitude(s, 0, b, t)) - 1) <= 1e-9
        assert abs(abs(amplitude(s, 0, 0, 2 * t)) - 1) <= 1e-8


# -- join closed form --------------------------------------------------------------


def test_join_closed_form_reduces_to_triangle():
    mu, eta = 0.9, -0.4
    t = np.linspace(0, 12, 97)
    delta = mu + eta
    big = math.sqrt(delta**2 + 8)
    tri = (
        np.exp(-1j * mu * t) * (-1j * np.sin(eta * t))
        + 0.5
        * np.exp(-1j * t * delta)
        * (np.exp(1j * t * delta / 2) * (np.cos(big * t / 2) - 1j * delta / big * np.sin(big * t / 2)) - 1)
    )
    got = join_amplitude_closed_form(gr.complete(2), mu, eta, 0.0, 1, 0, 1, t)
    np.testing.assert_allclose(got, tri, atol=1e-14)
    brute = amplitude(eigendecompose(gr.double_cone(1, mu, eta, gr.complete(1))), 0, 1, t)
    np.testing.assert_allclose(got, brute, atol=1e-12)


def test_join_closed_form_identity_at_zero():
    for a, b in [(0, 0), (0, 1), (1, 1)]:
        got = join_amplitude_closed_form(gr.complete(2), 0.3, 1.1, 2.0, 4, a, b, 0.0)
        assert got == pytest.approx(1.0 if a == b else 0.0, abs=1e-15)


@pytest.mark.parametrize(
    "g1, g2",
    [
        (gr.complete(2), gr.cycle(4)),
        (gr.cycle(4), gr.complete(3)),
        (gr.cycle(5), gr.empty(2)),
        (gr.hypercube(3), gr.cycle(6)),
    ],
    ids=["k2+c4", "c4+k3", "c5+e2", "q3+c6"],
)
def test_join_closed_form_matches_eigensolver(g1, g2):
    rng = np.random.default_rng(g1.n * 31 + g2.n)
    spectrum1 = eigendecompose(g1)
    for _ in range(25):
        mu1, eta1, mu2, eta2 = rng.uniform(-3, 3, size=4)
        t = rng.uniform(0, 10, size=8)
        joined = gr.join(gr.uniform_weighting(g1, mu1, eta1), gr.uniform_weighting(g2, mu2, eta2), 1)
        s = eigendecompose(joined)
        kappa2 = mu2 + eta2 * gr.regularity(g2)
        for a, b in [(0, 0), (0, 1), (0, g1.n - 1)]:
            got = join_amplitude_closed_form(g1, mu1, eta1, kappa2, g2.n, a, b, t, spectrum=spectrum1)
            np.testing.assert_allclose(got, amplitude(s, a, b, t), atol=1e-10)


def test_join_closed_form_needs_regular():
    with pytest.raises(ValueError):
        join_amplitude_closed_form(gr.path(3), 0, 1, 0, 1, 0, 1, 1.0)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10), st.integers(1, 10), st.floats(-50, 50), st.floats(-50, 50))
def test_join_spectrum_identities(n1, n2, k1, k2):
    parts = JoinSpectrumParts(n1, n2, k1, k2)
    assert max(parts.identity_residuals().values()) <= 1e-12


def test_join_parts_eigenvalues_appear_in_spectrum():
    g1 = gr.uniform_weighting(gr.cycle(4), 0.5, 1.5)
    g2 = gr.uniform_weighting(gr.complete(3), -1.0, 0.25)
    parts = JoinSpectrumParts(4, 3, 0.5 + 1.5 * 2, -1.0 + 0.25 * 2)
    s = eigendecompose(gr.join(g1, g2))
    for lam in parts.eigenvalues:
        assert np.min(np.abs(s.eigenvalues - lam)) < 1e-12


# -- half-join closed form ---------------------------------------------------------


def test_half_join_zero_time():
    p = HalfJoinParams(0.3, 1.2, 0.0, 1.0, 1.0, 1.0, n=3, k=0)
    assert half_join_amplitude_closed_form(p, 0.0) == pytest.approx(0, abs=1e-15)


def test_half_join_eps_zero_rejected():
    with pytest.raises(ValueError):
        HalfJoinParams(1, 1, 1, 1, 1, 0.0, n=3, k=0)


@pytest.mark.parametrize("base", [gr.empty(3), gr.cycle(4), gr.complete(1), gr.complete(4)], ids=repr)
def test_half_join_closed_form_matches_eigensolver(base):
    rng = np.random.default_rng(base.n + 100 * base.edge_count())
    k = gr.regularity(base)
    for _ in range(25):
        mu, eta, kappa, tau = rng.uniform(-3, 3, size=4)
        rho, eps = rng.uniform(0.05, 3, size=2)
        t = rng.uniform(0, 50, size=16)
        params = HalfJoinParams(mu, eta, kappa, tau, rho, eps, n=base.n, k=k)
        s = eigendecompose(gr.half_join(mu, eta, kappa, tau, rho, eps, base))
        np.testing.assert_allclose(half_join_amplitude_closed_form(params, t), amplitude(s, 0, 1, t), atol=1e-10)


def test_half_join_block_eigenvalues_appear_in_spectrum():
    params = HalfJoinParams(0.4, -1.1, 0.7, 0.9, 1.3, 0.6, n=4, k=2)
    s = eigendecompose(gr.half_join(0.4, -1.1, 0.7, 0.9, 1.3, 0.6, gr.cycle(4)))
    for branch in ("alpha", "beta"):
        for lam in params.eigenvalues(branch):
            assert np.min(np.abs(s.eigenvalues - lam)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(-3, 3), min_size=4, max_size=4),
    st.floats(0.01, 3),
    st.floats(0.01, 3),
    st.integers(1, 10),
    st.integers(0, 9),
)
def test_half_join_identities(weights, rho, eps, n, k):
    params = HalfJoinParams(*weights, rho, eps, n=n, k=min(k, n - 1))
    assert max(params.identity_residuals().values()) <= 1e-12


# -- hypercube closed form ---------------------------------------------------------------


def test_hypercube_closed_form_examples():
    assert abs(hypercube_amplitude_closed_form(1, 0, 1, math.pi / 2)) == pytest.approx(1)
    assert hypercube_amplitude_closed_form(1, 0, 1, math.pi / 2) == -1j
    assert hypercube_amplitude_closed_form(2, 0, 3, math.pi / 4) == pytest.approx(-0.5)
    for a in range(8):
        assert hypercube_amplitude_closed_form(3, a, a, math.pi / 4) == pytest.approx(1 / math.sqrt(8))
    with pytest.raises(ValueError):
        hypercube_amplitude_closed_form(2, 0, 1, 1.0)
    with pytest.raises(IndexError):
        hypercube_amplitude_closed_form(2, 0, 4, math.pi / 4)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("t", [math.pi / 4, math.pi / 2])
def test_hypercube_closed_form_matches_expm(n, t):
    u = expm(-1j * t * gr.hypercube(n).weights)
    for a in range(2**n):
        for b in range(2**n):
            assert abs(hypercube_amplitude_closed_form(n, a, b, t) - u[b, a]) < 1e-10


def test_spectrum_dict_layout():
    s = eigendecompose(gr.complete(2))
    d = s.to_dict()
    assert d["eigenvalues"] == pytest.approx([-1, 1])
    assert d["eigenvectors"][1] == pytest.approx([1 / math.sqrt(2)] * 2)
