"""One-mode zero-mean Gaussian states described by their second moments.

alpha = <p^2>, beta = <q^2>, gamma = <qp + pq>/2, so the (q, p) covariance
matrix is [[beta, gamma], [gamma, alpha]]. k_B = 1 throughout.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import xlogy

from .bosons import rotation, squeeze
from .errors import InvalidArgument, TruncationError
from .hilbert import CAPTURE_TOL, DensityMatrix, ModeSpace, momentum, position

NEG_EIG_TOL = 1e-10
# rounding slack on sigma >= 0; values inside it are treated as pure
SIGMA_TOL = 1e-12


@dataclass(frozen=True)
class GaussianState:
    alpha: float
    beta: float
    gamma: float = 0.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise InvalidArgument("alpha and beta must be positive")

    @property
    def determinant(self) -> float:
        return self.alpha * self.beta - self.gamma ** 2

    @property
    def covariance(self) -> np.ndarray:
        return np.array([[self.beta, self.gamma], [self.gamma, self.alpha]])

    @property
    def is_physical(self) -> bool:
        return self.determinant >= 0 and sigma(self) >= -SIGMA_TOL

    @classmethod
    def thermal(cls, nbar: float) -> "GaussianState":
        return cls(nbar + 0.5, nbar + 0.5, 0.0)

    @classmethod
    def from_sigma(cls, sig: float, gamma: float = 0.0, beta: float = None) -> "GaussianState":
        """Triple with the given sigma and correlation; beta defaults to the
        symmetric choice alpha = beta."""
        det = (sig + 0.5) ** 2 + gamma ** 2
        if beta is None:
            beta = np.sqrt(det)
        return cls(det / beta, beta, gamma)

    def rotated(self, angle: float) -> "GaussianState":
        """Second moments after rotating phase space by ``angle``."""
        c, s = np.cos(angle), np.sin(angle)
        R = np.array([[c, -s], [s, c]])
        V = R @ self.covariance @ R.T
        return GaussianState(V[1, 1], V[0, 0], V[0, 1])


def sigma(g: GaussianState) -> float:
    """sqrt(alpha*beta - gamma^2) - 1/2; negative means no quantum state."""
    det = g.determinant
    if det < 0:
        raise InvalidArgument(f"invalid covariance: alpha*beta - gamma^2 = {det:g} < 0")
    return float(np.sqrt(det) - 0.5)


def entropy_from_sigma(sig: float) -> float:
    if sig < -SIGMA_TOL:
        raise InvalidArgument(f"unphysical state: sigma = {sig:g} < 0")
    sig = max(sig, 0.0)
    return float(xlogy(sig + 1, sig + 1) - xlogy(sig, sig))


def entropy(g: GaussianState) -> float:
    """(sigma+1) ln(sigma+1) - sigma ln sigma, with 0 ln 0 = 0."""
    return entropy_from_sigma(sigma(g))


def wigner_eval(g: GaussianState, q_grid, p_grid) -> np.ndarray:
    """W(q, p) on a rectangular grid, rows indexed by q."""
    if not g.is_physical:
        raise InvalidArgument("Wigner function requested for an unphysical state")
    det = g.determinant
    Q, P = np.meshgrid(np.asarray(q_grid, float), np.asarray(p_grid, float), indexing="ij")
    form = g.alpha * Q ** 2 + g.beta * P ** 2 - 2 * g.gamma * Q * P
    return np.exp(-form / (2 * det)) / (2 * np.pi * np.sqrt(det))


def squeeze_parameters(g: GaussianState):
    """(nbar, r, phi) with rho = R(phi) S(r) rho_th(nbar) S^dag R^dag.

    S(r) with real r > 0 shrinks var(q) by e^{-2r}; R(phi) = exp(-i phi n)
    turns the squeezed axis to angle -phi in the (q, p) plane.
    """
    nbar = sigma(g)
    if nbar < -SIGMA_TOL:
        raise InvalidArgument("unphysical covariance")
    nbar = max(nbar, 0.0)
    vals, vecs = np.linalg.eigh(g.covariance)
    r = 0.25 * np.log(vals[1] / vals[0])
    u = vecs[:, 0]
    phi = -np.arctan2(u[1], u[0])
    return nbar, r, phi


def to_density_matrix(g: GaussianState, space: ModeSpace, pad: int = None,
                      tol: float = CAPTURE_TOL) -> DensityMatrix:
    """Squeezed thermal density matrix matching the second moments of g."""
    nbar, r, phi = squeeze_parameters(g)
    big = ModeSpace(space.cutoff + (pad if pad is not None else max(80, space.cutoff)))
    n = np.arange(big.dim)
    if nbar == 0:
        p_th = (n == 0).astype(float)
    else:
        p_th = (nbar / (nbar + 1)) ** n / (nbar + 1)
    U = rotation(big, phi).matrix @ squeeze(big, r).matrix
    rho = (U * p_th) @ U.conj().T
    rho = rho[: space.dim, : space.dim]
    captured = float(np.trace(rho).real)
    if captured < 1 - tol:
        raise TruncationError(
            f"density matrix keeps trace {captured:.12g} below the cutoff", captured)
    rho = rho / captured
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(space, rho, captured)


def _spectrum(rho: DensityMatrix) -> np.ndarray:
    w = scipy.linalg.eigvalsh(rho.matrix)
    if w.min() < -NEG_EIG_TOL:
        raise InvalidArgument(f"density matrix has negative eigenvalue {w.min():.3e}")
    return np.clip(w, 0, None)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    w = _spectrum(rho)
    return float(-np.sum(xlogy(w, w)))


def second_moments(rho: DensityMatrix) -> GaussianState:
    """(<p^2>, <q^2>, <qp+pq>/2) of a density matrix.

    Moments are taken with the top truncation level excluded from the
    quadrature operators, so they are exact for states that live below it.
    """
    big = ModeSpace(rho.basis.cutoff + 2)
    q, p = position(big).matrix, momentum(big).matrix
    R = np.zeros((big.dim, big.dim), dtype=complex)
    R[: rho.basis.dim, : rho.basis.dim] = rho.matrix
    ev = lambda M: float(np.trace(R @ M).real)
    return GaussianState(ev(p @ p), ev(q @ q), ev((q @ p + p @ q) / 2))


def photon_number_distribution(rho: DensityMatrix) -> np.ndarray:
    p = np.real(np.diag(rho.matrix)).copy()
    if abs(p.sum() - 1) > 1e-10:
        raise InvalidArgument(f"diagonal sums to {p.sum():.12g}, not 1")
    return p
