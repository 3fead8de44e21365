import warnings

import numpy as np
import pytest

from mustates.catdyn import (
    CavityParams, cat_decompose, cat_state, coherent_dicke, component_phis,
    effective_hamiltonian, evolve_analytic, evolve_numeric, ghz_fidelity, ghz_state,
    mixture_fringe, product_state, ramsey_fringe, reconstruct, symmetric_embedding, to_product)
from mustates.errors import ConditioningError, InvalidArgument
from mustates.hilbert import SpinSpace, StateVector



def params_with_eta(eta):
    # g^2 / delta_c = eta with kappa = 0 and delta_c = 100 g
    g = eta * 100
    return CavityParams(g=g, delta_c=100 * g)


def test_cavity_eta_formula():
    p = CavityParams(g=2.0, delta_c=30.0, kappa=5.0)
    assert p.eta == pytest.approx(4 * 30 / (25 + 900), rel=1e-15)


def test_cavity_warns_outside_dispersive_regime():
    with pytest.warns(RuntimeWarning):
        CavityParams(g=1.0, delta_c=5.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        CavityParams(g=1.0, delta_c=50.0)
    with pytest.raises(InvalidArgument):
        CavityParams(g=1.0, delta_c=50.0, nbar=-1)


def test_hamiltonian_single_atom():
    p = params_with_eta(0.7)
    assert np.allclose(np.diag(effective_hamiltonian(SpinSpace(1), p).matrix), [0, 0.7], atol=1e-15)


@pytest.mark.parametrize("N", [1, 4, 7])
def test_hamiltonian_diagonal_identity(N):
    p = params_with_eta(1.0)
    H = effective_hamiltonian(SpinSpace(N), p).matrix
    assert np.count_nonzero(H - np.diag(np.diag(H))) == 0
    K = np.arange(N + 1)[::-1]  # ascending m means K descends
    assert np.allclose(np.diag(H).real, (N - K) * (K + 1), atol=1e-12)


def test_analytic_initial_state_is_coherent():
    for N in (1, 3, 8):
        psi = evolve_analytic(1.1, 0.4, N, 1.0, 0.0)
        assert psi.fidelity(coherent_dicke(N, 1.1, 0.4)) > 1 - 1e-14
        assert np.allclose(psi.amplitudes, coherent_dicke(N, 1.1, 0.4).amplitudes, atol=1e-14)


@pytest.mark.parametrize("N", [1, 2, 5, 12, 20])
def test_analytic_matches_matrix_exponential(N):
    p = params_with_eta(0.8)
    start = coherent_dicke(N, 0.9, -0.3)
    for t in (0.3, 1.7, 4.0):
        num = evolve_numeric(start, effective_hamiltonian(SpinSpace(N), p), t)
        ana = evolve_analytic(0.9, -0.3, N, p.eta, t)
        assert num.fidelity(ana) > 1 - 1e-10
        assert np.allclose(num.amplitudes, ana.amplitudes, atol=1e-10)


def test_revival_after_full_period():
    psi = evolve_analytic(1.0, 0.2, 9, 0.5, 2 * np.pi / 0.5)
    assert psi.fidelity(coherent_dicke(9, 1.0, 0.2)) > 1 - 1e-12


def test_thermal_photons_keep_norm():
    p = CavityParams(g=1.0, delta_c=20.0, nbar=1.5)
    out = evolve_numeric(coherent_dicke(6, 0.7, 0.0), effective_hamiltonian(SpinSpace(6), p), 3.0)
    assert np.linalg.norm(out.amplitudes) == pytest.approx(1, abs=1e-13)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
@pytest.mark.parametrize("N", [5, 6, 9])
def test_cat_decomposition_exact(m, N):
    state = cat_state(N, theta=1.2, phi=0.3, m=m, eta=0.9)
    dec = cat_decompose(state, m, 1.2, 0.3)
    assert dec.residual < 1e-9
    assert np.allclose(reconstruct(dec, N), state.amplitudes, atol=1e-8)
    assert dec.family == ("odd" if m % 2 else "even")


@pytest.mark.parametrize("N", [2, 3, 4, 7])
def test_two_component_cat_weights(N):
    dec = cat_decompose(cat_state(N), 2, np.pi / 2, -np.pi / 2)
    assert np.allclose(dec.weights, 0.5, atol=1e-10)
    expected = np.exp(-1j * N * np.pi / 2) * np.array([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)]) / np.sqrt(2)
    assert np.allclose(dec.coefficients, expected, atol=1e-10)


def test_component_phis_offsets():
    assert np.allclose(component_phis(5, 3, 0.0, "odd"), np.pi * np.array([-5, -3, -1]) / 3)
    assert np.allclose(component_phis(4, 2, 0.1, "even"), 0.1 + np.pi * np.array([-3, -1]) / 2)


def test_cat_decomposition_degenerate_at_pole():
    with pytest.raises(ConditioningError):
        cat_decompose(coherent_dicke(4, 0.0, 0.0), 2, 0.0, 0.0)


def test_cat_decomposition_contract():
    with pytest.raises(InvalidArgument):
        cat_decompose(cat_state(3), 1, 1.0, 0.0)


def test_symmetric_embedding_isometry():
    for N in (1, 3, 6):
        W = symmetric_embedding(N)
        assert np.allclose(W.T @ W, np.eye(N + 1), atol=1e-15)


@pytest.mark.parametrize("N", range(2, 11))
def test_ghz_from_dynamics(N):
    assert ghz_fidelity(cat_state(N, m=2, eta=0.37)) > 1 - 1e-10


def test_ghz_state_normalized_and_symmetric():
    for N in (2, 5):
        g = ghz_state(N)
        assert np.linalg.norm(g) == pytest.approx(1, abs=1e-14)
        W = symmetric_embedding(N)
        assert np.linalg.norm(W @ (W.T @ g)) == pytest.approx(1, abs=1e-14)
    with pytest.raises(InvalidArgument):
        ghz_state(1)


def test_ghz_two_atoms_maximally_entangled():
    M = ghz_state(2).reshape(2, 2)
    reduced = M @ M.conj().T
    assert np.allclose(np.linalg.eigvalsh(reduced), [0.5, 0.5], atol=1e-14)


def test_product_states_far_from_ghz(rng):
    N = 4
    for _ in range(50):
        atoms = [rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(N)]
        atoms = [a / np.linalg.norm(a) for a in atoms]
        assert ghz_fidelity(product_state(atoms)) <= 0.5 + 1e-12
    assert ghz_fidelity(to_product(coherent_dicke(N, np.pi / 2, -np.pi / 2))) <= 0.5 + 1e-12


def test_ghz_fidelity_rejects_bad_length():
    with pytest.raises(InvalidArgument):
        ghz_fidelity(np.ones(6))


def test_ramsey_coherent_peak():
    beta = np.linspace(-np.pi, np.pi, 9)
    P = ramsey_fringe(coherent_dicke(5, np.pi / 2, 0.0), np.pi / 2, beta)
    assert P[4] == pytest.approx(1, abs=1e-14)
    assert np.all(P <= 1 + 1e-14)


def test_mixture_is_average():
    beta = np.linspace(-np.pi, np.pi, 11)
    a, b = coherent_dicke(3, 1.0, 0.0), coherent_dicke(3, 1.0, 2.0)
    mix = mixture_fringe([a, b], 1.0, beta)
    assert np.allclose(mix, (ramsey_fringe(a, 1.0, beta) + ramsey_fringe(b, 1.0, beta)) / 2, atol=0)


def _gap_oracle(N, beta):
    """|Re(i A1 A2*)|, A_j the per-atom product overlaps with the two cat components."""
    c = np.cos(np.pi / 4)
    out = []
    for b in beta:
        A = []
        for ph in (-np.pi / 2 + np.pi * (1 - N) / 2, -np.pi / 2 + np.pi * (3 - N) / 2):
            atom = c * c + np.exp(1j * (b - ph)) * c * c
            A.append(np.exp(1j * N * ph) * atom ** N)
        out.append(abs((1j * A[0] * np.conj(A[1])).real))
    return np.array(out)


@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_ramsey_gap_matches_oracle(N):
    beta = np.linspace(-np.pi, np.pi, 201)
    cat = cat_state(N)
    dec = cat_decompose(cat, 2, np.pi / 2, -np.pi / 2)
    comps = [coherent_dicke(N, np.pi / 2, p) for p in dec.component_phis]
    gap = np.abs(ramsey_fringe(cat, np.pi / 2, beta) - mixture_fringe(comps, np.pi / 2, beta))
    assert np.allclose(gap, _gap_oracle(N, beta), atol=1e-13)
    assert gap.max() == pytest.approx(2.0 ** -N if N % 2 else 0.0, abs=1e-13)


def test_ramsey_rejects_mode_state():
    from mustates.hilbert import ModeSpace, fock_state
    with pytest.raises(InvalidArgument):
        ramsey_fringe(fock_state(ModeSpace(2), 0), 1.0, [0.0])
