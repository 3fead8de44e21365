"""Single- and two-mode bosonic states.

Covers coherent and squeezed coherent states, even/odd cats, SU(1,1)
eigenstates and pair coherent states, plus their quadrature wavefunctions.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import gammaln

from .errors import InvalidArgument
from .hilbert import (CAPTURE_TOL, ModeSpace, Operator, ProductSpace, StateVector,
                      annihilation, checked_state, creation, embed, expectation,
                      number, position, momentum, tensor)
from .uncertainty import MinUncertaintySolution, eigen_solutions, variance


@dataclass(frozen=True)
class SqueezeParams:
    """Bogoliubov coefficients for the eigen-equation (mu*a + nu*a^dag)|psi> = alpha|psi>.

    ``from_lambda`` ties (mu, nu) to the ratio lam of the (x, p)
    minimum-uncertainty equation, so the resulting state has
    var(x) = |lam| * var(p) * |lam| for real lam.
    """

    lam: complex
    mu: complex
    nu: complex
    alpha: complex = 0j

    @classmethod
    def from_lambda(cls, lam, alpha=0j):
        lam = complex(lam)
        if lam == 0:
            raise InvalidArgument("lambda must be nonzero")
        r = cmath.sqrt(lam)  # principal branch, cut on the negative real axis
        mu = (r + 1 / r) / 2
        # x + i*lam*p = sqrt(2*lam) * (mu*a + nu*a^dag) fixes this sign of nu
        nu = (1 / r - r) / 2
        return cls(lam, mu, nu, complex(alpha))

    @classmethod
    def from_xp_eigenvalue(cls, lam, z):
        """Params whose state has x + i*lam*p eigenvalue z."""
        p = cls.from_lambda(lam)
        return cls(p.lam, p.mu, p.nu, complex(z) / cmath.sqrt(2 * p.lam))

    @property
    def xp_eigenvalue(self) -> complex:
        return cmath.sqrt(2 * self.lam) * self.alpha


@dataclass(frozen=True)
class PairCoherentParams:
    xi: complex
    q: int

    def __post_init__(self):
        if int(self.q) != self.q:
            raise InvalidArgument("q must be an integer")


def _padded(space: ModeSpace, pad=None) -> ModeSpace:
    return ModeSpace(space.cutoff + (pad if pad is not None else max(60, space.cutoff)))


def _coherent_amplitudes(dim: int, alpha: complex) -> np.ndarray:
    c = np.empty(dim, dtype=complex)
    c[0] = np.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, dim):
        c[n] = c[n - 1] * alpha / np.sqrt(n)
    return c


def coherent(space: ModeSpace, alpha: complex, tol: float = CAPTURE_TOL) -> StateVector:
    alpha = complex(alpha)
    if abs(alpha) ** 2 > space.cutoff / 4:
        raise InvalidArgument(
            f"|alpha|^2 = {abs(alpha) ** 2:g} exceeds cutoff/4 = {space.cutoff / 4:g}")
    c = _coherent_amplitudes(space.dim, alpha)
    return checked_state(space, c, float(np.vdot(c, c).real), tol)


def displacement(space: ModeSpace, beta: complex) -> Operator:
    a = annihilation(space)
    return Operator(space, scipy.linalg.expm((beta * a.dag() - np.conj(beta) * a).matrix))


def squeeze(space: ModeSpace, zeta: complex) -> Operator:
    """exp((zeta^* a^2 - zeta a^dag^2)/2); zeta = r e^{i th} maps
    a -> a cosh r - a^dag e^{i th} sinh r under S^dag a S."""
    a = annihilation(space)
    a2 = (a @ a).matrix
    return Operator(space, scipy.linalg.expm((np.conj(zeta) * a2 - zeta * a2.conj().T) / 2))


def rotation(space: ModeSpace, phi: float) -> Operator:
    return Operator(space, np.diag(np.exp(-1j * phi * np.arange(space.dim))))


def _truncate(v: np.ndarray, space: ModeSpace, tol: float) -> StateVector:
    head = v[: space.dim]
    return checked_state(space, head, float(np.vdot(head, head).real), tol)


def squeezed_coherent(space: ModeSpace, params: SqueezeParams,
                      tol: float = CAPTURE_TOL) -> StateVector:
    """D(beta) S(zeta)|0>, built by matrix exponentials on a padded space.

    mu*a + nu*a^dag is rescaled to a unit Bogoliubov operator
    cosh r * a + e^{i th} sinh r * a^dag (polar decomposition of mu, nu),
    which is annihilated (up to alpha) by the squeeze-then-displace state.
    """
    mu, nu = complex(params.mu), complex(params.nu)
    if not abs(nu) < abs(mu):
        raise InvalidArgument("|nu/mu| must be < 1 for a normalizable state")
    scale = np.sqrt(abs(mu) ** 2 - abs(nu) ** 2)
    chi = cmath.phase(mu)
    ch = abs(mu) / scale
    sh_phase = nu * cmath.exp(-1j * chi) / scale
    r = np.arccosh(ch)
    th = cmath.phase(sh_phase) if abs(sh_phase) > 0 else 0.0
    target = params.alpha * cmath.exp(-1j * chi) / scale
    beta = ch * target - sh_phase * np.conj(target)

    big = _padded(space, max(60, 2 * space.cutoff))
    vac = np.zeros(big.dim, dtype=complex)
    vac[0] = 1
    # S^dag a S = a cosh r - a^dag e^{i th} sinh r, so S a S^dag carries +sinh
    v = squeeze(big, r * cmath.exp(1j * th)).matrix @ vac
    v = displacement(big, beta).matrix @ v
    return _truncate(v, space, tol)


def bogoliubov_residual(state: StateVector, params: SqueezeParams) -> float:
    a = annihilation(state.basis)
    op = params.mu * a + params.nu * a.dag()
    return float(np.linalg.norm(op.apply(state) - params.alpha * state.amplitudes))


def even_odd_cat(space: ModeSpace, alpha: complex, parity: str = "even",
                 tol: float = CAPTURE_TOL) -> StateVector:
    """|alpha> +- |-alpha>, normalized."""
    if parity not in ("even", "odd"):
        raise InvalidArgument("parity must be 'even' or 'odd'")
    alpha = complex(alpha)
    if parity == "odd" and alpha == 0:
        raise InvalidArgument("the odd cat vanishes at alpha = 0")
    c = _coherent_amplitudes(space.dim, alpha)
    n = np.arange(space.dim)
    keep = (n % 2 == 0) if parity == "even" else (n % 2 == 1)
    v = np.where(keep, 2 * c, 0)
    # exact norm^2 of the untruncated superposition
    full = 2 * (1 + np.exp(-2 * abs(alpha) ** 2)) if parity == "even" \
        else 2 * (1 - np.exp(-2 * abs(alpha) ** 2))
    return checked_state(space, v, float(np.vdot(v, v).real) / full, tol)


def single_mode_su11(space: ModeSpace):
    """(K_-, K_+, K_0) = (a^2/2, a^dag^2/2, a^dag a + 1/2)."""
    a = annihilation(space)
    Km = (a @ a) / 2
    return Km, Km.dag(), number(space) + 0.5


def two_mode_su11(space_a: ModeSpace, space_b: ModeSpace):
    """(K_-, K_+, K_0) = (ab, a^dag b^dag, (a^dag a + b b^dag)/2)."""
    a, b = annihilation(space_a), annihilation(space_b)
    Km = tensor(a, b)
    na = np.diag(number(space_a).matrix).real
    bbd = np.diag((b @ b.dag()).matrix).real
    K0 = Operator(Km.basis, np.diag(np.add.outer(na, bbd).reshape(-1) / 2))
    return Km, Km.dag(), K0


def parity_operator(space: ModeSpace) -> Operator:
    return Operator(space, np.diag((-1.0) ** np.arange(space.dim)))


def number_difference(prod: ProductSpace) -> Operator:
    na = embed(number(prod.factors[0]), prod, 0)
    nb = embed(number(prod.factors[1]), prod, 1)
    return na - nb


def su11_eigenstate(K_minus: Operator, K_plus: Operator, mu: complex, nu: complex,
                    eigenvalue: complex = None, conserved: Operator = None,
                    ) -> list[MinUncertaintySolution]:
    """Solutions of (mu K_- + nu K_+)|psi> = z|psi>.

    ``lam`` of each solution is the equivalent (K_x, K_y) ratio
    (nu - mu)/(nu + mu); nu = 0 gives lam = -1. Pass ``conserved`` (parity
    for one mode, number difference for two) to split degenerate families.
    """
    M = mu * K_minus + nu * K_plus
    lam = (nu - mu) / (nu + mu) if (nu + mu) != 0 else None
    sols = []
    for v, z, res in eigen_solutions(M, eigenvalue=eigenvalue, conserved=conserved):
        k = int(np.argmax(np.abs(v)))
        v = v * abs(v[k]) / v[k]
        sols.append(MinUncertaintySolution(StateVector(M.basis, v), lam, z, res))
    return sols


def pair_norm_series(xi: complex, q: int, terms: int = None) -> float:
    """sum_n |xi|^{2n} / (n! (n+q)!) summed until terms underflow."""
    q = abs(int(q))
    x2 = abs(xi) ** 2
    if x2 == 0:
        return float(np.exp(-gammaln(q + 1)))
    n = np.arange(terms if terms is not None else int(4 * abs(xi) + 60))
    logs = n * np.log(x2) - gammaln(n + 1) - gammaln(n + q + 1)
    m = logs.max()
    return float(np.exp(m) * np.sum(np.exp(logs - m)))


def pair_coherent(space_a: ModeSpace, space_b: ModeSpace, params: PairCoherentParams,
                  tol: float = CAPTURE_TOL) -> StateVector:
    """N(xi, q) sum_n xi^n / sqrt(n!(n+q)!) |n+q, n>; negative q swaps modes."""
    xi, q = complex(params.xi), int(params.q)
    prod = ProductSpace((space_a, space_b))
    shift_a, shift_b = (q, 0) if q >= 0 else (0, -q)
    qa = abs(q)
    n_max = min(space_a.cutoff - shift_a, space_b.cutoff - shift_b)
    if n_max < 0:
        raise InvalidArgument(f"|q|={qa} does not fit below the cutoffs")
    amps = np.zeros((space_a.dim, space_b.dim), dtype=complex)
    n = np.arange(n_max + 1)
    log_mag = -0.5 * (gammaln(n + 1) + gammaln(n + qa + 1))
    if xi == 0:
        coeff = np.where(n == 0, np.exp(log_mag), 0)
    else:
        coeff = np.exp(n * np.log(abs(xi)) + log_mag) * np.exp(1j * n * cmath.phase(xi))
    amps[n + shift_a, n + shift_b] = coeff
    captured = float(np.sum(np.abs(coeff) ** 2)) / pair_norm_series(xi, qa)
    return checked_state(prod, amps.reshape(-1), captured, tol)


def hermite_functions(n_max: int, x) -> np.ndarray:
    """psi_n(x) for n = 0..n_max, shape (n_max+1, len(x)).

    Uses the normalized recurrence
    psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1},
    which stays finite where raw Hermite polynomials overflow.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros((n_max + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-x ** 2 / 2)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(1, n_max):
        out[n + 1] = np.sqrt(2 / (n + 1)) * x * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def wavefunction(state: StateVector, x) -> np.ndarray:
    """Position-space amplitude <x|psi> of a single-mode state."""
    if not isinstance(state.basis, ModeSpace):
        raise InvalidArgument("wavefunction expects a single-mode state")
    return state.amplitudes @ hermite_functions(state.basis.cutoff, x)


def quadrature_wavefunction(state: StateVector, x_grid, y_grid) -> np.ndarray:
    """Phi(x, y) = <x, y|psi> on a rectangular grid, rows indexed by x."""
    basis = state.basis
    if not (isinstance(basis, ProductSpace) and len(basis.factors) == 2
            and all(isinstance(f, ModeSpace) for f in basis.factors)):
        raise InvalidArgument("quadrature_wavefunction expects a two-mode state")
    fa, fb = basis.factors
    C = state.amplitudes.reshape(fa.dim, fb.dim)
    hx = hermite_functions(fa.cutoff, x_grid)
    hy = hermite_functions(fb.cutoff, y_grid)
    return hx.T @ C @ hy


def _mode_number(state: StateVector, mode) -> Operator:
    basis = state.basis
    if isinstance(basis, ModeSpace):
        if mode not in (None, 0):
            raise InvalidArgument("single-mode state has only mode 0")
        return number(basis)
    if mode is None:
        raise InvalidArgument("select a mode for a multimode state")
    return embed(number(basis.factors[mode]), basis, mode)


def mandel_q(state: StateVector, mode=None) -> float:
    """(var(n) - <n>)/<n>; negative means sub-Poissonian."""
    n_op = _mode_number(state, mode)
    mean = expectation(state, n_op).real
    if mean <= 0:
        raise InvalidArgument("Mandel Q is undefined for <n> = 0")
    return (variance(state, n_op) - mean) / mean


def quadrature_variances(state: StateVector) -> dict:
    """Single-mode and sum/difference quadrature variances of a two-mode state.

    Entries with value below the vacuum level 1/2 are listed under "squeezed".
    """
    prod = state.basis
    fa, fb = prod.factors
    xa, pa = embed(position(fa), prod, 0), embed(momentum(fa), prod, 0)
    xb, pb = embed(position(fb), prod, 1), embed(momentum(fb), prod, 1)
    r2 = np.sqrt(2)
    ops = {
        "x_a": xa, "p_a": pa, "x_b": xb, "p_b": pb,
        "x_sum": (xa + xb) / r2, "x_diff": (xa - xb) / r2,
        "p_sum": (pa + pb) / r2, "p_diff": (pa - pb) / r2,
    }
    out = {k: variance(state, v) for k, v in ops.items()}
    out["squeezed"] = sorted(k for k, v in out.items() if v < 0.5 - 1e-12)
    return out


def _gaussian2d(params, X, Y):
    amp, mx, my, l11, l21, l22 = params
    L = np.array([[l11, 0.0], [l21, l22]])
    prec = L @ L.T
    dx, dy = X - mx, Y - my
    return amp * np.exp(-0.5 * (prec[0, 0] * dx ** 2 + 2 * prec[0, 1] * dx * dy
                                + prec[1, 1] * dy ** 2))


def gaussian_fit_residual(density: np.ndarray, x_grid, y_grid) -> float:
    """Relative L2 residual of the least-squares best single 2-D Gaussian.

    Moment matching seeds a nonlinear least-squares fit over amplitude,
    mean and (Cholesky-factored) precision matrix.
    """
    from scipy.optimize import least_squares

    X, Y = np.meshgrid(np.asarray(x_grid, float), np.asarray(y_grid, float), indexing="ij")
    P = np.asarray(density, float)
    w = P / P.sum()
    mx, my = (w * X).sum(), (w * Y).sum()
    cov = np.array([[(w * (X - mx) ** 2).sum(), (w * (X - mx) * (Y - my)).sum()],
                    [(w * (X - mx) * (Y - my)).sum(), (w * (Y - my) ** 2).sum()]])
    L = np.linalg.cholesky(np.linalg.inv(cov))
    start = [P.max(), mx, my, L[0, 0], L[1, 0], L[1, 1]]
    fit = least_squares(lambda t: (_gaussian2d(t, X, Y) - P).ravel(), start)
    return float(np.linalg.norm(_gaussian2d(fit.x, X, Y) - P) / np.linalg.norm(P))
