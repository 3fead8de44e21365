"""Dispersive-cavity spin dynamics: cat states, GHZ states and Ramsey fringes.

Coherent states here carry the phase convention
|theta, phi> = e^{iN phi} prod_j (cos(theta/2)|g_j> + e^{-i phi} sin(theta/2)|e_j>),
i.e. e^{iN phi} U(theta, phi)|S, -S> with N = 2S atoms.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from functools import reduce
from itertools import combinations

import numpy as np
import scipy.linalg
from scipy.special import gammaln

from .errors import ConditioningError, InvalidArgument
from .hilbert import Operator, SpinSpace, StateVector, spin_operators
from .spin import atomic_coherent

log = logging.getLogger(__name__)

COND_LIMIT = 1e8


@dataclass(frozen=True)
class CavityParams:
    g: float
    delta_c: float
    kappa: float = 0.0
    nbar: float = 0.0

    def __post_init__(self):
        if self.nbar < 0:
            raise InvalidArgument("nbar must be >= 0")
        if abs(self.delta_c) < 10 * abs(self.g):
            warnings.warn(
                f"|delta_c| = {abs(self.delta_c):g} < 10 g: adiabatic elimination "
                "of the cavity is questionable", RuntimeWarning, stacklevel=2)

    @property
    def eta(self) -> float:
        return self.g ** 2 * self.delta_c / (self.kappa ** 2 + self.delta_c ** 2)


def effective_hamiltonian(space: SpinSpace, params: CavityParams) -> Operator:
    """eta [ N/2 (N/2 + 1) - S_z^2 + (2 nbar + 1) S_z ], hbar = 1."""
    half = space.S
    m = space.m_values
    diag = params.eta * (half * (half + 1) - m ** 2 + (2 * params.nbar + 1) * m)
    return Operator(space, np.diag(diag))


def coherent_dicke(N: int, theta: float, phi: float) -> StateVector:
    """Atomic coherent state of N atoms with the e^{iN phi} phase convention."""
    space = SpinSpace(N)
    base = atomic_coherent(space, theta, phi, sign=-1)
    return StateVector(space, np.exp(1j * N * phi) * base.amplitudes)


def evolve_analytic(theta: float, phi: float, N: int, eta: float, t: float) -> StateVector:
    """Closed-form e^{-iht}|theta, phi> for nbar = 0.

    The amplitude on |N/2, N/2 - K> is
    C(N,K)^{1/2} e^{iK phi} sin^{N-K}(theta/2) cos^K(theta/2) e^{-i (N-K)(K+1) eta t}.
    """
    space = SpinSpace(N)
    K = np.arange(N + 1)
    s, c = np.sin(theta / 2), np.cos(theta / 2)
    logbin = 0.5 * (gammaln(N + 1) - gammaln(K + 1) - gammaln(N - K + 1))
    amp = (np.exp(logbin) * s ** (N - K) * c ** K
           * np.exp(1j * K * phi) * np.exp(-1j * (N - K) * (K + 1) * eta * t))
    # K counts down from m = N/2; storage ascends in m
    return StateVector(space, amp[::-1])


def evolve_numeric(state: StateVector, H: Operator, t: float) -> StateVector:
    return StateVector(state.basis, scipy.linalg.expm(-1j * t * H.matrix) @ state.amplitudes)


def component_phis(N: int, m: int, phi: float, family: str) -> np.ndarray:
    """Azimuths of the coherent components: offsets (2q - N) or (2q - N + 1)."""
    q = np.arange(m)
    shift = 0 if family == "odd" else 1
    return phi + np.pi * (2 * q - N + shift) / m


@dataclass(frozen=True)
class CatDecomposition:
    m: int
    coefficients: np.ndarray
    component_phis: np.ndarray
    theta: float
    residual: float
    family: str

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2


def _fit(state: StateVector, N, m, theta, phi, family):
    phis = component_phis(N, m, phi, family)
    V = np.stack([coherent_dicke(N, theta, p).amplitudes for p in phis], axis=1)
    sv = np.linalg.svd(V, compute_uv=False)
    cond = sv[0] / sv[-1] if sv[-1] > 0 else np.inf
    if cond > COND_LIMIT:
        raise ConditioningError(
            f"coherent-state family is degenerate (condition number {cond:.3g})")
    f, *_ = np.linalg.lstsq(V, state.amplitudes, rcond=None)
    resid = float(np.linalg.norm(state.amplitudes - V @ f) ** 2)
    return f, phis, resid


def cat_decompose(state: StateVector, m: int, theta: float, phi: float) -> CatDecomposition:
    """Least-squares expansion of a state in m coherent states |theta, phi_q>.

    Both offset families are tried and the one with the lower residual kept
    (``family`` records which). residual = 1 - fidelity of the projection.
    """
    if m < 2:
        raise InvalidArgument("m must be >= 2")
    if not isinstance(state.basis, SpinSpace):
        raise InvalidArgument("cat_decompose expects a Dicke-space state")
    N = state.basis.two_S
    # the family matching the parity of m goes first and wins ties
    order = ("odd", "even") if m % 2 else ("even", "odd")
    best = None
    for family in order:
        f, phis, resid = _fit(state, N, m, theta, phi, family)
        if best is None or resid < best[2] - 1e-15:
            best = (f, phis, resid, family)
    f, phis, resid, family = best
    log.debug("cat_decompose m=%d N=%d family=%s residual=%.3e", m, N, family, resid)
    return CatDecomposition(m, f, phis, theta, resid, family)


def reconstruct(dec: CatDecomposition, N: int) -> np.ndarray:
    return sum(c * coherent_dicke(N, dec.theta, p).amplitudes
               for c, p in zip(dec.coefficients, dec.component_phis))


# --- product space of N two-level atoms; qubit 0 = |g>, 1 = |e>, atom 0 most significant

def symmetric_embedding(N: int) -> np.ndarray:
    """Isometry (2^N x (N+1)) from Dicke |N/2, m> to the symmetric subspace."""
    W = np.zeros((2 ** N, N + 1))
    for k in range(N + 1):  # k excited atoms, m = k - N/2
        idx = [sum(1 << (N - 1 - j) for j in c) for c in combinations(range(N), k)]
        W[idx, k] = 1 / np.sqrt(len(idx))
    return W


def product_state(single_states) -> np.ndarray:
    return reduce(np.kron, [np.asarray(s, dtype=complex) for s in single_states])


def ghz_state(N: int) -> np.ndarray:
    """e^{i pi/4}/sqrt2 [ prod (|g> + c|e>)/sqrt2 - i prod (|g> - c|e>)/sqrt2 ], c = (-i)^N."""
    if N < 2:
        raise InvalidArgument("GHZ state needs N >= 2")
    c = (-1j) ** N
    plus = product_state([np.array([1, c]) / np.sqrt(2)] * N)
    minus = product_state([np.array([1, -c]) / np.sqrt(2)] * N)
    return np.exp(1j * np.pi / 4) / np.sqrt(2) * (plus - 1j * minus)


def to_product(state: StateVector) -> np.ndarray:
    if not isinstance(state.basis, SpinSpace):
        raise InvalidArgument("expected a Dicke-space state")
    return symmetric_embedding(state.basis.two_S) @ state.amplitudes


def ghz_fidelity(state) -> float:
    """|<GHZ|psi>|^2 for a Dicke-space StateVector or a raw product-space vector."""
    if isinstance(state, StateVector):
        v = to_product(state)
    else:
        v = np.asarray(state, dtype=complex)
        v = v / np.linalg.norm(v)
    N = int(round(np.log2(v.size)))
    if 2 ** N != v.size:
        raise InvalidArgument("product-space vector length must be a power of two")
    return float(abs(np.vdot(ghz_state(N), v)) ** 2)


def cat_state(N: int, theta: float = np.pi / 2, phi: float = -np.pi / 2, m: int = 2,
              eta: float = 1.0) -> StateVector:
    """Evolved coherent state at t = pi/(m eta)."""
    return evolve_analytic(theta, phi, N, eta, np.pi / (m * eta))


def ramsey_fringe(state: StateVector, alpha: float, beta_grid) -> np.ndarray:
    """P(beta) = |<alpha, beta|psi>|^2 with <alpha, beta| an atomic coherent bra."""
    if not isinstance(state.basis, SpinSpace):
        raise InvalidArgument("ramsey_fringe expects a Dicke-space state")
    N = state.basis.two_S
    return np.array([abs(coherent_dicke(N, alpha, b).overlap(state)) ** 2
                     for b in np.asarray(beta_grid, float)])


def mixture_fringe(components, alpha: float, beta_grid) -> np.ndarray:
    """Fringe of an equal-weight incoherent mixture of component states."""
    return np.mean([ramsey_fringe(c, alpha, beta_grid) for c in components], axis=0)
