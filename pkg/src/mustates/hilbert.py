"""Truncated Fock spaces, Dicke spaces, states and dense operators.

Basis ordering is fixed: Fock levels ascend in n, Dicke levels ascend in m
from -S to S, and product spaces are Kronecker-ordered (first factor slowest).
Units are hbar = m = omega = 1, so x = (a + a^dag)/sqrt(2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Union

import numpy as np

from .errors import InvalidArgument, TruncationError

HERMITIAN_RTOL = 1e-12
# default floor on the norm a Fock constructor must capture below the cutoff
CAPTURE_TOL = 1e-8


@dataclass(frozen=True)
class ModeSpace:
    cutoff: int

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise InvalidArgument(f"cutoff must be an integer >= 1, got {self.cutoff!r}")

    @property
    def dim(self) -> int:
        return self.cutoff + 1


@dataclass(frozen=True)
class SpinSpace:
    two_S: int

    def __post_init__(self):
        if int(self.two_S) != self.two_S or self.two_S < 1:
            raise InvalidArgument(f"two_S must be an integer >= 1, got {self.two_S!r}")

    @property
    def S(self) -> float:
        return self.two_S / 2

    @property
    def dim(self) -> int:
        return self.two_S + 1

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(self.dim) - self.S


@dataclass(frozen=True)
class ProductSpace:
    factors: tuple

    def __post_init__(self):
        flat = []
        for f in self.factors:
            flat.extend(f.factors if isinstance(f, ProductSpace) else (f,))
        object.__setattr__(self, "factors", tuple(flat))

    @property
    def dim(self) -> int:
        return int(np.prod([f.dim for f in self.factors]))


Space = Union[ModeSpace, SpinSpace, ProductSpace]


def fock_space(cutoff: int) -> ModeSpace:
    return ModeSpace(cutoff)


def spin_space(two_S: int) -> SpinSpace:
    return SpinSpace(two_S)


def _check_same(b1, b2, what="operands"):
    if b1 != b2:
        raise InvalidArgument(f"basis mismatch between {what}: {b1} vs {b2}")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state. ``captured_norm`` records the squared norm that
    survived truncation before renormalization (1.0 when nothing was cut)."""

    basis: Space
    amplitudes: np.ndarray
    captured_norm: float = 1.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.basis.dim:
            raise InvalidArgument(
                f"{amps.size} amplitudes for a space of dimension {self.basis.dim}")
        nrm = np.linalg.norm(amps)
        if nrm == 0 or not np.isfinite(nrm):
            raise InvalidArgument("state has zero or non-finite norm")
        amps = amps / nrm
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def overlap(self, other: "StateVector") -> complex:
        _check_same(self.basis, other.basis, "states")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return abs(self.overlap(other)) ** 2

    def __repr__(self):
        return f"StateVector(basis={self.basis}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    basis: Space
    matrix: np.ndarray
    captured_trace: float = 1.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.basis.dim, self.basis.dim):
            raise InvalidArgument(f"density matrix shape {m.shape} does not match basis")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class Operator:
    basis: Space
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.basis.dim, self.basis.dim):
            raise InvalidArgument(f"operator shape {m.shape} does not match basis {self.basis}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def is_hermitian(self, rtol: float = HERMITIAN_RTOL) -> bool:
        m = self.matrix
        scale = max(np.max(np.abs(m), initial=0.0), 1.0)
        return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= rtol * scale)

    def dag(self) -> "Operator":
        return Operator(self.basis, self.matrix.conj().T)

    def apply(self, state: StateVector) -> np.ndarray:
        """Unnormalized image of a state (returned as a raw vector)."""
        _check_same(self.basis, state.basis, "operator and state")
        return self.matrix @ state.amplitudes

    def __matmul__(self, other):
        if isinstance(other, Operator):
            _check_same(self.basis, other.basis)
            return Operator(self.basis, self.matrix @ other.matrix)
        if isinstance(other, StateVector):
            return self.apply(other)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Operator):
            _check_same(self.basis, other.basis)
            return Operator(self.basis, self.matrix + other.matrix)
        return Operator(self.basis, self.matrix + other * np.eye(self.basis.dim))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1) * other

    def __rsub__(self, other):
        return (-1) * self + other

    def __mul__(self, c):
        return Operator(self.basis, self.matrix * complex(c))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Operator(self.basis, self.matrix / complex(c))

    def __neg__(self):
        return (-1) * self


def identity(space: Space) -> Operator:
    return Operator(space, np.eye(space.dim))


def commutator(A: Operator, B: Operator) -> Operator:
    return A @ B - B @ A


def anticommutator(A: Operator, B: Operator) -> Operator:
    return A @ B + B @ A


def annihilation(space: ModeSpace) -> Operator:
    return Operator(space, np.diag(np.sqrt(np.arange(1, space.dim)), k=1))


def creation(space: ModeSpace) -> Operator:
    return annihilation(space).dag()


def number(space: ModeSpace) -> Operator:
    return Operator(space, np.diag(np.arange(space.dim, dtype=float)))


def position(space: ModeSpace) -> Operator:
    a = annihilation(space)
    return (a + a.dag()) / np.sqrt(2)


def momentum(space: ModeSpace) -> Operator:
    a = annihilation(space)
    return (a - a.dag()) / (1j * np.sqrt(2))


@dataclass(frozen=True)
class SpinOperators:
    Sx: Operator
    Sy: Operator
    Sz: Operator
    Sp: Operator
    Sm: Operator

    def __iter__(self):
        return iter((self.Sx, self.Sy, self.Sz, self.Sp, self.Sm))

    def along(self, n) -> Operator:
        """n . S for a real 3-vector n."""
        return n[0] * self.Sx + n[1] * self.Sy + n[2] * self.Sz


def spin_operators(space: SpinSpace) -> SpinOperators:
    S = space.S
    m = space.m_values
    # <S, m+1 | S+ | S, m>, m from -S to S-1
    up = np.sqrt(S * (S + 1) - m[:-1] * (m[:-1] + 1))
    Sp = np.diag(up, k=-1).astype(complex)
    Sm = Sp.conj().T
    Sz = np.diag(m).astype(complex)
    Sx = (Sp + Sm) / 2
    Sy = (Sp - Sm) / 2j
    mk = lambda M: Operator(space, M)
    return SpinOperators(mk(Sx), mk(Sy), mk(Sz), mk(Sp), mk(Sm))


def tensor(*ops: Operator) -> Operator:
    basis = ProductSpace(tuple(o.basis for o in ops))
    return Operator(basis, reduce(np.kron, [o.matrix for o in ops]))


def tensor_state(*states: StateVector) -> StateVector:
    basis = ProductSpace(tuple(s.basis for s in states))
    amps = reduce(np.kron, [s.amplitudes for s in states])
    captured = float(np.prod([s.captured_norm for s in states]))
    return StateVector(basis, amps, captured)


def embed(op: Operator, space: ProductSpace, index: int) -> Operator:
    """Lift a single-factor operator into slot ``index`` of a product space."""
    _check_same(op.basis, space.factors[index], "operator and product factor")
    mats = [np.eye(f.dim) for f in space.factors]
    mats[index] = op.matrix
    return Operator(space, reduce(np.kron, mats))


def basis_state(space: Space, index) -> StateVector:
    """Unit vector; ``index`` may be a tuple of per-factor indices for products."""
    if isinstance(index, tuple):
        index = int(np.ravel_multi_index(index, [f.dim for f in space.factors]))
    v = np.zeros(space.dim, dtype=complex)
    v[index] = 1.0
    return StateVector(space, v)


def fock_state(space: ModeSpace, n: int) -> StateVector:
    if not 0 <= n <= space.cutoff:
        raise InvalidArgument(f"|{n}> lies outside cutoff {space.cutoff}")
    return basis_state(space, n)


def dicke_state(space: SpinSpace, m: float) -> StateVector:
    k = m + space.S
    if abs(k - round(k)) > 1e-12 or not 0 <= round(k) <= space.two_S:
        raise InvalidArgument(f"m={m} is not a level of S={space.S}")
    return basis_state(space, int(round(k)))


def expectation(state: StateVector, op: Operator) -> complex:
    if isinstance(state, DensityMatrix):
        _check_same(state.basis, op.basis, "density matrix and operator")
        return complex(np.trace(state.matrix @ op.matrix))
    _check_same(state.basis, op.basis, "state and operator")
    psi = state.amplitudes
    return complex(np.vdot(psi, op.matrix @ psi))


def checked_state(space: Space, raw: np.ndarray, captured: float,
                  tol: float = CAPTURE_TOL) -> StateVector:
    """Wrap truncated amplitudes, enforcing the captured-norm policy."""
    if captured < 1 - tol:
        raise TruncationError(
            f"only {captured:.12g} of the norm lies below the cutoff "
            f"(tolerance {tol:g}); raise the cutoff", captured)
    return StateVector(space, raw, captured)


def top_levels(space: Space) -> np.ndarray:
    """Boolean mask of product-basis indices sitting on any Fock top level."""
    factors = space.factors if isinstance(space, ProductSpace) else (space,)
    mask = np.zeros([f.dim for f in factors], dtype=bool)
    for i, f in enumerate(factors):
        if isinstance(f, ModeSpace):
            idx = [slice(None)] * len(factors)
            idx[i] = f.cutoff
            mask[tuple(idx)] = True
    return mask.reshape(-1)
