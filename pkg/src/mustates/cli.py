"""Command-line front end.

    mustates <command> [options] [--out PATH] [--format json|csv] [--seed-check]

Exit codes: 0 success, 2 usage error, 3 numerical failure (truncation,
conditioning, failed invariant). Errors are reported on stderr as a JSON
object {"error": {"type": ..., "message": ...}}. Without --out, output goes
to $MUSTATES_OUTPUT_DIR/<command>.<format> when that variable is set, and
to stdout otherwise. File outputs get a ``.meta.json`` sidecar carrying the
provenance (parameters, version, timestamp); data files never do.
"""
from __future__ import annotations

import argparse
import datetime
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, bosons, catdyn, checks, gaussian, spin
from .errors import ConditioningError, InvalidArgument, TruncationError
from .hilbert import ModeSpace, SpinSpace, fock_state, dicke_state, momentum, position, spin_operators
from .io import dumps, grid_to_json, to_jsonable, write_grid_csv, write_table_csv
from .uncertainty import solve_min_uncertainty, uncertainty_report, verify_identities

COMMANDS = ("state", "uncertainty", "wigner", "quadgrid", "catdyn", "ghz", "ramsey")
OUTPUT_ENV = "MUSTATES_OUTPUT_DIR"


class UsageError(Exception):
    pass


class NumericalFailure(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    output_path: str = None
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")


def parse_complex(text) -> complex:
    if isinstance(text, (int, float, complex)):
        return complex(text)
    t = str(text).strip().replace(" ", "").replace("i", "j")
    if t.endswith("j") and (t == "j" or t[-2] in "+-"):
        t = t[:-1] + "1j"
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mustates", description="Minimum-uncertainty states of quantum optics")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", dest="output_path")
        sp.add_argument("--format", choices=("json", "csv"), default=None)
        sp.add_argument("--seed-check", action="store_true")

    s = sub.add_parser("state", help="construct a state and dump its amplitudes")
    s.add_argument("--kind", required=True, choices=(
        "coherent", "squeezed", "cat", "pair", "fock", "atomic-coherent", "atomic-squeezed", "dicke"))
    s.add_argument("--cutoff", type=int, default=60)
    s.add_argument("--alpha", type=parse_complex, default=0j)
    s.add_argument("--lambda", dest="lam", type=parse_complex, default=1 + 0j)
    s.add_argument("--parity", choices=("even", "odd"), default="even")
    s.add_argument("--xi", type=parse_complex, default=1 + 0j)
    s.add_argument("--q", type=int, default=0)
    s.add_argument("--n", type=int, default=0)
    s.add_argument("--two-s", type=int, default=2)
    s.add_argument("--theta", type=float, default=0.0)
    s.add_argument("--phi", type=float, default=0.0)
    s.add_argument("--eta", type=float, default=0.0)
    s.add_argument("--m", type=float, default=0.0)
    s.add_argument("--sign", type=int, choices=(1, -1), default=-1)
    common(s)

    u = sub.add_parser("uncertainty", help="minimum-uncertainty state and its report")
    u.add_argument("--pair", default="x,p", help="x,p | sx,sy | sy,sz | sz,sx")
    u.add_argument("--lambda", dest="lam", type=parse_complex, default=1 + 0j)
    u.add_argument("--z", type=parse_complex, default=0j, help="target eigenvalue")
    u.add_argument("--cutoff", type=int, default=120)
    u.add_argument("--two-s", type=int, default=10)
    common(u)

    w = sub.add_parser("wigner", help="Gaussian Wigner function on a grid")
    w.add_argument("--alpha", type=float, required=True, help="<p^2>")
    w.add_argument("--beta", type=float, required=True, help="<q^2>")
    w.add_argument("--gamma", type=float, default=0.0, help="<qp+pq>/2")
    w.add_argument("--grid", type=int, default=201)
    w.add_argument("--extent", type=float, default=5.0)
    common(w)

    q = sub.add_parser("quadgrid", help="pair coherent quadrature distribution")
    q.add_argument("--xi", type=parse_complex, default=3 + 0j)
    q.add_argument("--q", type=int, default=0)
    q.add_argument("--grid", type=int, default=161)
    q.add_argument("--extent", type=float, default=4.0)
    q.add_argument("--cutoff", type=int, default=40)
    q.add_argument("--amplitude", action="store_true", help="emit complex Phi instead of |Phi|^2")
    common(q)

    c = sub.add_parser("catdyn", help="dispersive evolution and cat decomposition")
    c.add_argument("--n", type=int, required=True, help="number of atoms")
    c.add_argument("--theta", type=float, default=np.pi / 2)
    c.add_argument("--phi", type=float, default=-np.pi / 2)
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--eta-t", type=float, help="dimensionless eta*t")
    g.add_argument("--m", type=int, help="evolve to eta*t = pi/m and decompose")
    common(c)

    h = sub.add_parser("ghz", help="GHZ equivalence of the m=2 cat state")
    h.add_argument("--n", type=int, required=True)
    h.add_argument("--check", action="store_true", help="fail unless fidelity is 1 within 1e-10")
    common(h)

    r = sub.add_parser("ramsey", help="Ramsey fringes of the m=2 cat state")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--alpha", type=float, default=np.pi / 2)
    r.add_argument("--theta", type=float, default=np.pi / 2)
    r.add_argument("--phi", type=float, default=-np.pi / 2)
    r.add_argument("--points", type=int, default=361)
    common(r)
    return p


def config_from_args(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    if command is None:
        raise UsageError("a command is required: " + ", ".join(COMMANDS))
    out = ns.pop("output_path")
    fmt = ns.pop("format")
    if fmt is None:
        fmt = "csv" if command in ("quadgrid", "wigner", "ramsey") else "json"
    return RunConfig(command, ns, out, fmt)


# --- command implementations: each returns (payload, kind) where kind is
# "json" (dict), "grid" ((grid, x, y, extra)) or "table" ((columns, extra))

def _cmd_state(p):
    kind = p["kind"]
    info = {}
    if kind == "coherent":
        st = bosons.coherent(ModeSpace(p["cutoff"]), p["alpha"])
    elif kind == "fock":
        st = fock_state(ModeSpace(p["cutoff"]), p["n"])
    elif kind == "squeezed":
        sq = bosons.SqueezeParams.from_lambda(p["lam"], p["alpha"])
        st = bosons.squeezed_coherent(ModeSpace(p["cutoff"]), sq)
        info = {"mu": sq.mu, "nu": sq.nu, "bogoliubov_residual": bosons.bogoliubov_residual(st, sq)}
        p = dict(p, squeeze=sq)
    elif kind == "cat":
        st = bosons.even_odd_cat(ModeSpace(p["cutoff"]), p["alpha"], p["parity"])
    elif kind == "pair":
        sp = ModeSpace(p["cutoff"])
        st = bosons.pair_coherent(sp, sp, bosons.PairCoherentParams(p["xi"], p["q"]))
    elif kind == "dicke":
        st = dicke_state(SpinSpace(p["two_s"]), p["m"])
    elif kind == "atomic-coherent":
        st = spin.atomic_coherent(SpinSpace(p["two_s"]), p["theta"], p["phi"], p["sign"])
        p = dict(p, eta_eff=float(p["sign"]))
    else:
        spec = spin.AtomicSqueezedSpec(spin.SpinDirectionFrame(p["theta"], p["phi"]), p["eta"], p["m"])
        st = spin.atomic_squeezed(SpinSpace(p["two_s"]), spec)
        info = {"squeezing_xi_aligned": _safe(spin.squeezing_xi, st)}
    out = {"kind": kind, "state": st, **info}
    seed = checks.check_state(st, kind, p) if p["seed_check"] else None
    return out, "json", seed


def _safe(fn, *a):
    try:
        return fn(*a)
    except InvalidArgument:
        return None


def _pair_ops(p):
    name = p["pair"].replace(" ", "").lower()
    if name == "x,p":
        sp = ModeSpace(p["cutoff"])
        return position(sp), momentum(sp)
    ops = spin_operators(SpinSpace(p["two_s"]))
    table = {"sx": ops.Sx, "sy": ops.Sy, "sz": ops.Sz}
    try:
        a, b = (table[k] for k in name.split(","))
    except (KeyError, ValueError):
        raise UsageError(f"unknown operator pair {p['pair']!r}")
    return a, b


def _cmd_uncertainty(p):
    A, B = _pair_ops(p)
    sols = solve_min_uncertainty(A, B, p["lam"])
    if not sols:
        raise NumericalFailure("no minimum-uncertainty state survives truncation")
    sol = min(sols, key=lambda s: (abs(s.eigenvalue - p["z"]), s.residual))
    if abs(sol.eigenvalue - p["z"]) > 1e-6:
        sols = solve_min_uncertainty(A, B, p["lam"], eigenvalue=p["z"])
        if not sols:
            raise NumericalFailure(f"no solution with eigenvalue {p['z']}")
        sol = sols[0]
    rep = uncertainty_report(sol.state, A, B)
    ident = verify_identities(sol, A, B)
    out = {
        "pair": p["pair"], "lambda": sol.lam, "eigenvalue": sol.eigenvalue,
        "residual": sol.residual, "report": rep.as_dict(),
        "identities": ident._asdict(),
    }
    seed = checks.check_uncertainty(sol, A, B) if p["seed_check"] else None
    return out, "json", seed


def _axis(extent, n):
    if n < 2:
        raise UsageError("grid needs at least 2 points")
    return np.linspace(-extent, extent, n)


def _cmd_wigner(p):
    g = gaussian.GaussianState(p["alpha"], p["beta"], p["gamma"])
    sig = gaussian.sigma(g)
    if sig < -gaussian.SIGMA_TOL:
        raise InvalidArgument(f"unphysical second moments: sigma = {sig:.6g} < 0")
    ax = _axis(p["extent"], p["grid"])
    W = gaussian.wigner_eval(g, ax, ax)
    extra = {"sigma": sig, "entropy": gaussian.entropy(g)}
    seed = checks.check_wigner(g) if p["seed_check"] else None
    return (W, ax, ax, extra), "grid", seed


def _cmd_quadgrid(p):
    sp = ModeSpace(p["cutoff"])
    st = bosons.pair_coherent(sp, sp, bosons.PairCoherentParams(p["xi"], p["q"]))
    ax = _axis(p["extent"], p["grid"])
    Phi = bosons.quadrature_wavefunction(st, ax, ax)
    grid = Phi if p["amplitude"] else np.abs(Phi) ** 2
    extra = {"xi": p["xi"], "q": p["q"], "cutoff": p["cutoff"],
             "quantity": "Phi" if p["amplitude"] else "|Phi|^2"}
    seed = checks.check_pair(p["xi"], p["q"], p["cutoff"]) if p["seed_check"] else None
    return (grid, ax, ax, extra), "grid", seed


def _cmd_catdyn(p):
    N, th, ph = p["n"], p["theta"], p["phi"]
    if N < 1:
        raise UsageError("--n must be >= 1")
    eta_t = p["eta_t"] if p["m"] is None else np.pi / p["m"]
    st = catdyn.evolve_analytic(th, ph, N, 1.0, eta_t)
    out = {"n": N, "theta": th, "phi": ph, "eta_t": eta_t, "state": st}
    if p["m"] is not None:
        dec = catdyn.cat_decompose(st, p["m"], th, ph)
        out["decomposition"] = {
            "m": dec.m, "family": dec.family, "residual": dec.residual,
            "coefficients": dec.coefficients, "weights": dec.weights,
            "component_phis": dec.component_phis,
        }
    seed = checks.check_catdyn(N, th, ph, eta_t) if p["seed_check"] else None
    return out, "json", seed


def _cmd_ghz(p):
    N = p["n"]
    fid = catdyn.ghz_fidelity(catdyn.cat_state(N))
    if p["check"] and abs(fid - 1) > 1e-10:
        raise NumericalFailure(f"GHZ fidelity {fid!r} differs from 1 by more than 1e-10")
    seed = checks.check_ghz(N) if p["seed_check"] else None
    return {"n": N, "fidelity": fid}, "json", seed


def _cmd_ramsey(p):
    N, a = p["n"], p["alpha"]
    if N < 1:
        raise UsageError("--n must be >= 1")
    beta = np.linspace(-np.pi, np.pi, p["points"])
    cat = catdyn.cat_state(N, p["theta"], p["phi"])
    dec = catdyn.cat_decompose(cat, 2, p["theta"], p["phi"])
    comps = [catdyn.coherent_dicke(N, p["theta"], f) for f in dec.component_phis]
    P_cat = catdyn.ramsey_fringe(cat, a, beta)
    P_mix = catdyn.mixture_fringe(comps, a, beta)
    P_coh = catdyn.ramsey_fringe(catdyn.coherent_dicke(N, p["theta"], p["phi"]), a, beta)
    cols = {"beta": beta, "P_cat": P_cat, "P_mixture": P_mix, "P_coherent": P_coh}
    extra = {"max_gap_mixture": float(np.max(np.abs(P_cat - P_mix))),
             "max_gap_coherent": float(np.max(np.abs(P_cat - P_coh)))}
    seed = checks.check_ramsey(cat, a, beta, P_mix, comps) if p["seed_check"] else None
    return (cols, extra), "table", seed


HANDLERS = {
    "state": _cmd_state, "uncertainty": _cmd_uncertainty, "wigner": _cmd_wigner,
    "quadgrid": _cmd_quadgrid, "catdyn": _cmd_catdyn, "ghz": _cmd_ghz, "ramsey": _cmd_ramsey,
}


def _render(payload, kind, fmt, seed, stream):
    if kind == "json":
        if seed is not None:
            payload = dict(payload, seed_check=seed)
        if fmt == "csv":
            raise UsageError("this command only emits JSON")
        stream.write(dumps(payload))
    elif kind == "grid":
        grid, x, y, extra = payload
        if fmt == "csv":
            write_grid_csv(stream, grid, x, y)
        else:
            d = dict(grid_to_json(grid, x, y), **to_jsonable(extra))
            if seed is not None:
                d["seed_check"] = seed
            stream.write(dumps(d))
    else:
        cols, extra = payload
        if fmt == "csv":
            write_table_csv(stream, cols)
        else:
            d = {"columns": cols, **extra}
            if seed is not None:
                d["seed_check"] = seed
            stream.write(dumps(d))


def _extra(payload, kind):
    if kind == "grid":
        return payload[3]
    if kind == "table":
        return payload[1]
    return {}


def _fail(code, etype, message, stream):
    stream.write(json.dumps({"error": {"type": etype, "message": message}}) + "\n")
    return code


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    params = dict(config.params)
    params.setdefault("seed_check", False)
    try:
        payload, kind, seed = HANDLERS[config.command](params)
        buf = io.StringIO()
        _render(payload, kind, config.format, seed, buf)
    except UsageError as e:
        return _fail(2, "usage", str(e), stderr)
    except InvalidArgument as e:
        return _fail(2, "invalid-argument", str(e), stderr)
    except TruncationError as e:
        return _fail(3, "truncation", str(e), stderr)
    except ConditioningError as e:
        return _fail(3, "conditioning", str(e), stderr)
    except NumericalFailure as e:
        return _fail(3, "numerical", str(e), stderr)

    out_path = config.output_path
    if out_path is None and os.environ.get(OUTPUT_ENV):
        out_path = str(Path(os.environ[OUTPUT_ENV]) / f"{config.command}.{config.format}")
    if out_path is None:
        stdout.write(buf.getvalue())
        if seed is not None and kind != "json" and config.format == "csv":
            stderr.write(json.dumps({"seed_check": seed}) + "\n")
    else:
        path = Path(out_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(buf.getvalue(), newline="")
        meta = {
            "command": config.command, "format": config.format,
            "params": to_jsonable({k: v for k, v in config.params.items()}),
            "version": __version__,
            "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "summary": to_jsonable(_extra(payload, kind)),
        }
        if seed is not None:
            meta["seed_check"] = seed
        Path(str(path) + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    if seed is not None and not all(seed.values()):
        failed = sorted(k for k, v in seed.items() if not v)
        return _fail(3, "seed-check", "failed invariants: " + ", ".join(failed), stderr)
    return 0


def main(argv=None) -> int:
    try:
        config = config_from_args(argv)
    except UsageError as e:
        return _fail(2, "usage", str(e), sys.stderr)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
