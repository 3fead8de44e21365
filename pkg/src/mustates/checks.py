"""Invariant suites run by the CLI ``--seed-check`` flag.

Each function returns {check name: bool}; all are cheap (well under a second).
"""
from __future__ import annotations

import numpy as np

from . import bosons, catdyn, gaussian, spin
from .hilbert import (ModeSpace, SpinSpace, annihilation, commutator, momentum,
                      position, spin_operators)
from .uncertainty import solve_min_uncertainty, uncertainty_report


def ladder_algebra(cutoff=10):
    sp = ModeSpace(cutoff)
    a = annihilation(sp)
    c = commutator(a, a.dag()).matrix
    return bool(np.max(np.abs(c[:-1, :-1] - np.eye(cutoff))) < 1e-13)


def spin_algebra(two_S=5):
    ops = spin_operators(SpinSpace(two_S))
    c = commutator(ops.Sx, ops.Sy).matrix - 1j * ops.Sz.matrix
    return bool(np.max(np.abs(c)) < 1e-12)


def check_state(state, kind, params):
    out = {"normalized": abs(np.linalg.norm(state.amplitudes) - 1) < 1e-12}
    if kind == "coherent":
        a = annihilation(state.basis)
        out["eigenrelation"] = np.linalg.norm(a.apply(state) - params["alpha"] * state.amplitudes) < 1e-8
    elif kind == "squeezed":
        out["eigenrelation"] = bosons.bogoliubov_residual(state, params["squeeze"]) < 1e-8
    elif kind == "cat":
        a = annihilation(state.basis)
        a2 = (a @ a).apply(state)
        out["eigenrelation"] = np.linalg.norm(a2 - params["alpha"] ** 2 * state.amplitudes) < 1e-8
    elif kind == "pair":
        Km, _, _ = bosons.two_mode_su11(*state.basis.factors)
        out["eigenrelation"] = np.linalg.norm(Km.apply(state) - params["xi"] * state.amplitudes) < 1e-8
    elif kind in ("atomic-coherent", "atomic-squeezed"):
        f = spin.SpinDirectionFrame(params["theta"], params["phi"])
        eta = params.get("eta_eff", params.get("eta"))
        _, r = spin.eigen_residual(state, spin.spin_mus_operator(state.basis, f, eta))
        out["eigenrelation"] = r < 1e-9
    return {k: bool(v) for k, v in out.items()}


def check_uncertainty(solution, A, B):
    rep = uncertainty_report(solution.state, A, B)
    return {
        "ladder_algebra": ladder_algebra(),
        "spin_algebra": spin_algebra(),
        "saturation": bool(abs(rep.equality_residual) < 1e-9),
        "bound": bool(rep.product >= rep.bound - 1e-10),
    }


def check_wigner(g):
    grid = np.linspace(-12, 12, 481)
    W = gaussian.wigner_eval(g, grid, grid)
    h = grid[1] - grid[0]
    rot = [abs(gaussian.sigma(g.rotated(t)) - gaussian.sigma(g)) for t in np.linspace(0, np.pi, 7)]
    out = {
        "inversion_symmetry": bool(np.allclose(W, W[::-1, ::-1], rtol=0, atol=1e-15)),
        "sigma_rotation_invariant": bool(max(rot) < 1e-12),
    }
    if gaussian.sigma(g) <= 3:
        out["integral"] = bool(abs(W.sum() * h * h - 1) < 1e-6)
    return out


def check_pair(xi, q, cutoff):
    sp = ModeSpace(cutoff)
    phi = bosons.pair_coherent(sp, sp, bosons.PairCoherentParams(xi, q))
    Km, _, _ = bosons.two_mode_su11(sp, sp)
    D = bosons.number_difference(phi.basis)
    return {
        "eigen_ab": bool(np.linalg.norm(Km.apply(phi) - xi * phi.amplitudes) < 1e-9),
        "number_difference": bool(np.linalg.norm(D.apply(phi) - q * phi.amplitudes) < 1e-12),
    }


def check_catdyn(N, theta, phi, eta_t):
    a = catdyn.evolve_analytic(theta, phi, N, 1.0, eta_t)
    space = SpinSpace(N)
    H = catdyn.effective_hamiltonian(space, catdyn.CavityParams(1.0, 100.0))
    H = H / catdyn.CavityParams(1.0, 100.0).eta
    num = catdyn.evolve_numeric(catdyn.coherent_dicke(N, theta, phi), H, eta_t)
    return {
        "analytic_vs_numeric": bool(1 - a.fidelity(num) < 1e-10),
        "norm": bool(abs(np.linalg.norm(a.amplitudes) - 1) < 1e-12),
    }


def check_ghz(N):
    return {"ghz_equivalence": bool(1 - catdyn.ghz_fidelity(catdyn.cat_state(N)) < 1e-10)}


def check_ramsey(state, alpha, beta_grid, mix, comps):
    direct = np.mean([catdyn.ramsey_fringe(c, alpha, beta_grid) for c in comps], axis=0)
    P = catdyn.ramsey_fringe(state, alpha, beta_grid)
    return {
        "mixture_definition": bool(np.allclose(direct, mix, rtol=0, atol=1e-15)),
        "probabilities_in_range": bool(np.all((P > -1e-12) & (P < 1 + 1e-12))),
    }
