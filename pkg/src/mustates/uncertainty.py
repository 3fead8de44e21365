"""Uncertainty relation bookkeeping and minimum-uncertainty eigenstates.

A minimum-uncertainty state for the pair (A, B) solves

    (dA + i*lam*dB) |psi> = 0,   dA = A - <A>,

which is solved here as an eigenproblem of the non-normal matrix A + i*lam*B.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg

from .errors import InvalidArgument
from .hilbert import (DensityMatrix, Operator, StateVector, anticommutator,
                      commutator, expectation, top_levels)

COMMUTATOR_TOL = 1e-10
GHOST_TOL = 1e-6
RESIDUAL_CUT = 1e-6


def _require_pure(state):
    if isinstance(state, DensityMatrix) or not isinstance(state, StateVector):
        raise InvalidArgument(
            "uncertainty analysis is defined for pure states only; "
            "use mustates.gaussian for mixed Gaussian states")


def _require_hermitian(op: Operator, name="operator"):
    if not op.is_hermitian():
        raise InvalidArgument(f"{name} is not hermitian")


def variance(state: StateVector, op: Operator) -> float:
    _require_pure(state)
    _require_hermitian(op)
    v = op.apply(state)
    mean = np.vdot(state.amplitudes, v).real
    # <op^2> as |op psi|^2 keeps the result nonnegative up to rounding
    return max(float(np.vdot(v, v).real - mean ** 2), 0.0)


def covariance(state: StateVector, A: Operator, B: Operator) -> float:
    """Symmetrized covariance 1/2 <{dA, dB}>."""
    _require_pure(state)
    _require_hermitian(A, "A")
    _require_hermitian(B, "B")
    va, vb = A.apply(state), B.apply(state)
    psi = state.amplitudes
    return float(np.vdot(va, vb).real - np.vdot(psi, va).real * np.vdot(psi, vb).real)


@dataclass(frozen=True)
class UncertaintyReport:
    var_A: float
    var_B: float
    product: float
    commutator_mean: complex
    anticommutator_mean: float
    bound: float
    equality_residual: float

    def as_dict(self):
        return {
            "var_A": self.var_A, "var_B": self.var_B, "product": self.product,
            "commutator_mean": self.commutator_mean,
            "anticommutator_mean": self.anticommutator_mean,
            "bound": self.bound, "equality_residual": self.equality_residual,
        }


def commutator_operator(A: Operator, B: Operator) -> Operator:
    """C with [A, B] = iC; raises when C is not hermitian."""
    comm = commutator(A, B)
    C = comm * (-1j)
    m = C.matrix
    dev = float(np.max(np.abs(m - m.conj().T), initial=0.0))
    scale = max(np.max(np.abs(m), initial=0.0), 1.0)
    if dev > COMMUTATOR_TOL * scale:
        raise InvalidArgument(
            f"[A, B] is not anti-hermitian (deviation {dev:.3e}); "
            "likely a truncation artifact")
    return C


def uncertainty_report(state: StateVector, A: Operator, B: Operator) -> UncertaintyReport:
    _require_pure(state)
    _require_hermitian(A, "A")
    _require_hermitian(B, "B")
    C = commutator_operator(A, B)
    var_a, var_b = variance(state, A), variance(state, B)
    c_mean = expectation(state, C)
    anti = 2 * covariance(state, A, B)
    product = var_a * var_b
    return UncertaintyReport(
        var_A=var_a,
        var_B=var_b,
        product=product,
        commutator_mean=c_mean,
        anticommutator_mean=anti,
        bound=abs(c_mean) ** 2 / 4,
        equality_residual=product - abs(c_mean / 2) ** 2 - (anti / 2) ** 2,
    )


@dataclass(frozen=True)
class MinUncertaintySolution:
    state: StateVector
    lam: Optional[complex]
    eigenvalue: complex
    residual: float


def _candidates(M: np.ndarray, eigenvalue):
    if eigenvalue is None:
        _, vecs = scipy.linalg.eig(M)
        return vecs.T
    # near-null space of M - z: right singular vectors with small singular value
    shifted = M - eigenvalue * np.eye(M.shape[0])
    _, s, vh = scipy.linalg.svd(shifted)
    scale = max(np.max(np.abs(M), initial=0.0), 1.0)
    keep = s <= RESIDUAL_CUT * scale
    return vh.conj()[keep]


def eigen_solutions(M: Operator, basis=None, eigenvalue=None, conserved: Operator = None):
    """Normalizable eigenvectors of a dense (generally non-normal) operator.

    Vectors with amplitude above GHOST_TOL on a Fock top level are treated as
    truncation ghosts and dropped. With ``eigenvalue`` set, only the near-null
    space of M - eigenvalue is searched. A diagonal ``conserved`` operator
    splits the search into its eigen-sectors, which resolves degeneracies.
    Returns (vector, eigenvalue, residual) triples sorted by residual.
    """
    mat = M.matrix
    dim = mat.shape[0]
    top = top_levels(M.basis)
    if conserved is not None:
        diag = np.diag(conserved.matrix).real
        if np.max(np.abs(conserved.matrix - np.diag(np.diag(conserved.matrix))), initial=0) > 0:
            raise InvalidArgument("conserved operator must be diagonal in the working basis")
        sectors = [np.flatnonzero(np.isclose(diag, d)) for d in np.unique(np.round(diag, 9))]
    else:
        sectors = [np.arange(dim)]

    out = []
    for idx in sectors:
        sub = mat[np.ix_(idx, idx)]
        for w in _candidates(sub, eigenvalue):
            v = np.zeros(dim, dtype=complex)
            v[idx] = w
            v /= np.linalg.norm(v)
            if np.any(np.abs(v[top]) > GHOST_TOL):
                continue
            Mv = mat @ v
            z = complex(np.vdot(v, Mv)) if eigenvalue is None else complex(eigenvalue)
            res = float(np.linalg.norm(Mv - z * v))
            if res >= RESIDUAL_CUT:
                continue
            # defective matrices (e.g. truncated a) repeat the same eigenvector
            if any(abs(np.vdot(u, v)) > 1 - 1e-12 for u, _, _ in out):
                continue
            out.append((v, z, res))
    out.sort(key=lambda t: t[2])
    return out


def _principal_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def solve_min_uncertainty(A: Operator, B: Operator, lam: complex,
                          eigenvalue: complex = None) -> list[MinUncertaintySolution]:
    """Minimum-uncertainty states for (A, B) at complex ratio ``lam``.

    Without ``eigenvalue`` every surviving eigenvector of A + i*lam*B is
    returned; with it, only states whose eigenvalue z = <A> + i*lam*<B>
    equals the target. An empty list means nothing survives truncation.
    """
    _require_hermitian(A, "A")
    _require_hermitian(B, "B")
    lam = complex(lam)
    if lam == 0:
        raise InvalidArgument("lambda must be nonzero")
    M = A + 1j * lam * B
    sols = []
    for v, _, _ in eigen_solutions(M, eigenvalue=eigenvalue):
        v = _principal_phase(v)
        psi = StateVector(A.basis, v)
        z = expectation(psi, A) + 1j * lam * expectation(psi, B)
        res = float(np.linalg.norm(M.apply(psi) - z * psi.amplitudes))
        sols.append(MinUncertaintySolution(psi, lam, z, res))
    sols.sort(key=lambda s: s.residual)
    return sols


class IdentityCheck(NamedTuple):
    var_a: float
    scaled_var_b: float
    anticommutator: float
    commutator_term: float
    correlation_checked: bool


def verify_identities(solution: MinUncertaintySolution, A: Operator, B: Operator) -> IdentityCheck:
    """Both sides of var(A) = |lam|^2 var(B) and <{dA,dB}> = (Im lam/Re lam) <C>.

    The correlation identity is skipped (``correlation_checked`` False, commutator_term NaN)
    when Re lam = 0.
    """
    lam = complex(solution.lam)
    psi = solution.state
    var_a = variance(psi, A)
    scaled_var_b = abs(lam) ** 2 * variance(psi, B)
    anticommutator = 2 * covariance(psi, A, B)
    if lam.real == 0:
        return IdentityCheck(var_a, scaled_var_b, anticommutator, float("nan"), False)
    c_mean = expectation(psi, commutator_operator(A, B)).real
    return IdentityCheck(var_a, scaled_var_b, anticommutator, lam.imag / lam.real * c_mean, True)
