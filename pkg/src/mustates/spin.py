"""Collective-spin minimum-uncertainty states in the Dicke basis |S, m>.

The rotation U(theta, phi) = exp(xi S+ - xi^* S-), xi = (theta/2) e^{-i phi},
turns the spin about the axis (sin phi, -cos phi, 0) by theta. The frame
vectors (a, b) used for a.S + i*eta*b.S are the images of x and y under that
same rotation, so U|S,+-S> and the squeezed family built on it are exact
eigenvectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import InvalidArgument
from .hilbert import (ModeSpace, Operator, ProductSpace, SpinSpace, StateVector,
                      annihilation, dicke_state, embed, expectation, spin_operators, tensor)


def rotation_matrix(theta: float, phi: float) -> np.ndarray:
    """SO(3) image of U(theta, phi) acting on spin vectors."""
    n = np.array([np.sin(phi), -np.cos(phi), 0.0])
    K = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return np.eye(3) + np.sin(theta) * K + (1 - np.cos(theta)) * K @ K


@dataclass(frozen=True)
class SpinDirectionFrame:
    theta: float
    phi: float

    @cached_property
    def _R(self):
        return rotation_matrix(self.theta, self.phi)

    @property
    def a(self) -> np.ndarray:
        return self._R[:, 0]

    @property
    def b(self) -> np.ndarray:
        return self._R[:, 1]

    @property
    def n(self) -> np.ndarray:
        """Mean-spin direction of U|S, +S>."""
        return self._R[:, 2]


@dataclass(frozen=True)
class AtomicSqueezedSpec:
    frame: SpinDirectionFrame
    eta: float
    m: float

    def __post_init__(self):
        if not abs(self.eta) < 1:
            raise InvalidArgument("|eta| must be < 1; eta = +-1 are the coherent states")

    @property
    def mu(self) -> float:
        return float(np.arctanh(self.eta))


def rotation_unitary(space: SpinSpace, theta: float, phi: float) -> Operator:
    ops = spin_operators(space)
    xi = theta / 2 * np.exp(-1j * phi)
    gen = xi * ops.Sp.matrix - np.conj(xi) * ops.Sm.matrix
    return Operator(space, scipy.linalg.expm(gen))


def spin_mus_operator(space: SpinSpace, frame: SpinDirectionFrame, eta: float) -> Operator:
    """(a.S) + i*eta*(b.S)."""
    ops = spin_operators(space)
    return ops.along(frame.a) + 1j * eta * ops.along(frame.b)


def atomic_coherent(space: SpinSpace, theta: float, phi: float, sign: int = -1) -> StateVector:
    """U(theta, phi)|S, sign*S>. sign=-1 gives the state of atoms
    cos(theta/2)|g> + e^{-i phi} sin(theta/2)|e>."""
    if sign not in (1, -1):
        raise InvalidArgument("sign must be +1 or -1")
    seed = dicke_state(space, sign * space.S)
    return StateVector(space, rotation_unitary(space, theta, phi).apply(seed))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return v * abs(v[k]) / v[k]


def atomic_squeezed(space: SpinSpace, spec: AtomicSqueezedSpec) -> StateVector:
    """N U(theta, phi) e^{mu S_z} e^{-i pi/2 S_y} |S, m>, eta = tanh(mu).

    The non-unitary factor is applied directly and the result renormalized.
    The global phase makes the largest amplitude real and positive.
    """
    ops = spin_operators(space)
    seed = dicke_state(space, spec.m).amplitudes
    v = scipy.linalg.expm(-1j * np.pi / 2 * ops.Sy.matrix) @ seed
    v = np.exp(spec.mu * space.m_values) * v
    v = rotation_unitary(space, spec.frame.theta, spec.frame.phi).matrix @ v
    return StateVector(space, _fix_phase(v / np.linalg.norm(v)))


def squeezed_eigenvalue(space: SpinSpace, spec: AtomicSqueezedSpec) -> float:
    """Eigenvalue of a.S + i*eta*b.S on the squeezed state: m*sqrt(1-eta^2)."""
    return spec.m * np.sqrt(1 - spec.eta ** 2)


def eigen_residual(state: StateVector, op: Operator) -> tuple[complex, float]:
    """Rayleigh eigenvalue estimate and ||(op - z)psi||."""
    v = op.apply(state)
    z = complex(np.vdot(state.amplitudes, v))
    return z, float(np.linalg.norm(v - z * state.amplitudes))


def population_distribution(state: StateVector) -> np.ndarray:
    """p(l) = |<S, m|psi>|^2 indexed by l = S + m (the number of excited atoms)."""
    if not isinstance(state.basis, SpinSpace):
        raise InvalidArgument("population_distribution expects a spin state")
    return np.abs(state.amplitudes) ** 2


def mean_spin(state: StateVector) -> np.ndarray:
    ops = spin_operators(state.basis)
    return np.array([expectation(state, O).real for O in (ops.Sx, ops.Sy, ops.Sz)])


def spin_covariance(state: StateVector) -> np.ndarray:
    """Symmetrized 3x3 covariance of (S_x, S_y, S_z)."""
    ops = spin_operators(state.basis)
    vs = [O.apply(state) for O in (ops.Sx, ops.Sy, ops.Sz)]
    psi = state.amplitudes
    means = [np.vdot(psi, v).real for v in vs]
    cov = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            cov[i, j] = np.vdot(vs[i], vs[j]).real - means[i] * means[j]
    return cov


def squeezing_xi(state: StateVector, variant: str = "aligned") -> float:
    """Spectroscopic squeezing parameter sqrt(2S) dS_perp / |<S>|.

    ``literal`` uses S_x for the fluctuation and |<S_z>| for the signal.
    ``aligned`` takes the signal along the mean spin and minimizes the
    fluctuation over directions transverse to it.
    """
    S = state.basis.S
    if variant == "literal":
        ops = spin_operators(state.basis)
        sz = expectation(state, ops.Sz).real
        if abs(sz) < 1e-12:
            raise InvalidArgument("<S_z> = 0: literal squeezing parameter undefined")
        dsx = np.sqrt(max(spin_covariance(state)[0, 0], 0.0))
        return float(np.sqrt(2 * S) * dsx / abs(sz))
    if variant != "aligned":
        raise InvalidArgument("variant must be 'literal' or 'aligned'")
    mean = mean_spin(state)
    length = np.linalg.norm(mean)
    if length < 1e-12:
        raise InvalidArgument("<S> = 0: aligned squeezing parameter undefined")
    n = mean / length
    # orthonormal transverse pair
    helper = np.eye(3)[np.argmin(np.abs(n))]
    e1 = np.cross(n, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    E = np.stack([e1, e2], axis=1)
    vmin = np.linalg.eigvalsh(E.T @ spin_covariance(state) @ E)[0]
    return float(np.sqrt(2 * S) * np.sqrt(max(vmin, 0.0)) / length)


def schwinger_space(space: SpinSpace) -> ProductSpace:
    return ProductSpace((ModeSpace(space.two_S), ModeSpace(space.two_S)))


def schwinger_map(state: StateVector) -> StateVector:
    """|S, m> -> |S+m, S-m> in two modes of cutoff 2S each."""
    space = state.basis
    if not isinstance(space, SpinSpace):
        raise InvalidArgument("schwinger_map expects a spin state")
    prod = schwinger_space(space)
    d = space.two_S + 1
    amps = np.zeros((d, d), dtype=complex)
    k = np.arange(d)  # k = S + m photons in mode a
    amps[k, space.two_S - k] = state.amplitudes
    return StateVector(prod, amps.reshape(-1))


def schwinger_operators(space: SpinSpace):
    """(a^dag b, a b^dag, (a^dag a - b^dag b)/2) on the Schwinger two-mode space."""
    prod = schwinger_space(space)
    a = embed(annihilation(prod.factors[0]), prod, 0)
    b = embed(annihilation(prod.factors[1]), prod, 1)
    return a.dag() @ b, a @ b.dag(), (a.dag() @ a - b.dag() @ b) / 2


def beamsplitter_amplitude(S: float, m: float) -> float:
    """<S, S| exp{(pi/4)(a^dag b - a b^dag)} |S+m, S-m> in the two-mode space."""
    two_S = int(round(2 * S))
    if abs(2 * S - two_S) > 1e-12 or two_S < 1:
        raise InvalidArgument("2S must be a positive integer")
    if two_S % 2:
        raise InvalidArgument("output port |S, S> needs integer S")
    if abs(m) > S or abs((S + m) - round(S + m)) > 1e-12:
        raise InvalidArgument(f"m={m} is not a level of S={S}")
    mode = ModeSpace(two_S)
    a, b = annihilation(mode).matrix, annihilation(mode).matrix
    eye = np.eye(mode.dim)
    A, B = np.kron(a, eye), np.kron(eye, b)
    gen = np.pi / 4 * (A.conj().T @ B - A @ B.conj().T)
    U = scipy.linalg.expm(gen)
    Si = two_S // 2
    out_idx = Si * mode.dim + Si
    in_idx = int(round(S + m)) * mode.dim + int(round(S - m))
    return float(U[out_idx, in_idx].real)
