import numpy as np
import pytest
from hypothesis import given, strategies as st

from mustates.bosons import coherent
from mustates.errors import InvalidArgument
from mustates.hilbert import (
    ModeSpace, SpinSpace, StateVector, annihilation, basis_state, commutator, creation,
    dicke_state, expectation, fock_space, fock_state, identity, number, spin_operators,
    tensor, tensor_state)


def test_fock_space_dimensions():
    assert fock_space(1).dim == 2
    assert fock_space(100).dim == 101
    with pytest.raises(InvalidArgument):
        fock_space(0)
    with pytest.raises(InvalidArgument):
        fock_space(-3)


def test_spin_space_dimension():
    assert SpinSpace(3).dim == 4
    assert SpinSpace(3).S == 1.5
    with pytest.raises(InvalidArgument):
        SpinSpace(0)


def test_annihilation_on_low_states():
    sp = fock_space(5)
    a = annihilation(sp)
    assert np.allclose(a.apply(fock_state(sp, 0)), 0)
    assert np.allclose(a.apply(fock_state(sp, 1)), fock_state(sp, 0).amplitudes)
    assert a.matrix[2, 3] == pytest.approx(np.sqrt(3))


def test_ladder_commutator_cutoff_10():
    sp = fock_space(10)
    a = annihilation(sp)
    c = commutator(a, creation(sp)).matrix
    assert np.max(np.abs(c[:-1, :-1] - np.eye(10))) < 1e-13
    # deviation sits only on |cutoff>: [a, a^dag] there equals -cutoff
    assert c[-1, -1] == pytest.approx(-10)


@pytest.mark.parametrize("two_S", [1, 2, 3, 8, 17, 40])
def test_spin_commutators(two_S):
    ops = spin_operators(SpinSpace(two_S))
    Sx, Sy, Sz = ops.Sx.matrix, ops.Sy.matrix, ops.Sz.matrix
    tol = 1e-12
    assert np.max(np.abs(Sx @ Sy - Sy @ Sx - 1j * Sz)) < tol
    assert np.max(np.abs(Sy @ Sz - Sz @ Sy - 1j * Sx)) < tol
    assert np.max(np.abs(Sz @ Sx - Sx @ Sz - 1j * Sy)) < tol


def test_spin_casimir_S2():
    sp = SpinSpace(4)
    ops = spin_operators(sp)
    S2 = sum(O.matrix @ O.matrix for O in (ops.Sx, ops.Sy, ops.Sz))
    assert np.max(np.abs(S2 - 6 * np.eye(5))) < 1e-13


def test_highest_weight():
    sp = SpinSpace(5)
    top = dicke_state(sp, 2.5)
    assert np.allclose(spin_operators(sp).Sz.apply(top), 2.5 * top.amplitudes)
    assert expectation(top, spin_operators(sp).Sz) == pytest.approx(2.5)


def test_ladder_matrix_elements():
    sp = SpinSpace(3)
    ops = spin_operators(sp)
    S = 1.5
    for m in sp.m_values[:-1]:
        up = ops.Sp.apply(dicke_state(sp, m))
        k = int(m + S) + 1
        assert abs(up[k]) == pytest.approx(np.sqrt(S * (S + 1) - m * (m + 1)))


def test_tensor_identity_and_mixed_product():
    s5 = fock_space(4)
    I = identity(s5)
    assert np.allclose(tensor(I, I).matrix, np.eye(25))
    a = annihilation(s5)
    lhs = tensor(a, I) @ tensor(I, a)
    assert np.allclose(lhs.matrix, tensor(a, a).matrix)


def test_tensor_state_vacuum():
    sp = fock_space(3)
    v = tensor_state(fock_state(sp, 0), fock_state(sp, 0))
    assert v.amplitudes[0] == 1 and np.count_nonzero(v.amplitudes) == 1
    assert v.basis.dim == 16


def test_tensor_associative(rng):
    # integer entries keep every product exact, so equality can be bitwise
    mats = [rng.integers(-5, 6, (d, d)) + 1j * rng.integers(-5, 6, (d, d)) for d in (2, 3, 2)]
    from mustates.hilbert import Operator
    A, B, C = (Operator(ModeSpace(d - 1), m) for d, m in zip((2, 3, 2), mats))
    left = tensor(tensor(A, B), C)
    right = tensor(A, tensor(B, C))
    assert np.array_equal(left.matrix, right.matrix)
    assert left.basis == right.basis


def test_expectation_basics():
    sp = fock_space(6)
    assert expectation(fock_state(sp, 0), number(sp)) == 0
    with pytest.raises(InvalidArgument):
        expectation(fock_state(sp, 0), number(fock_space(7)))


def test_coherent_mean_photon_number():
    # oracle: Poisson mean |alpha|^2; the series tail beyond n = 60 is < 1e-40
    psi = coherent(fock_space(60), 1.5)
    assert expectation(psi, number(psi.basis)).real == pytest.approx(2.25, abs=1e-9)


def test_state_vector_normalizes_and_rejects_zero():
    sp = fock_space(2)
    s = StateVector(sp, [3, 4j, 0])
    assert np.linalg.norm(s.amplitudes) == pytest.approx(1, abs=1e-12)
    with pytest.raises(InvalidArgument):
        StateVector(sp, [0, 0, 0])
    with pytest.raises(InvalidArgument):
        StateVector(sp, [1, 0])


@given(st.integers(1, 12), st.integers(0, 2 ** 32 - 1))
def test_hermitian_expectation_is_real(two_S, seed):
    rng = np.random.default_rng(seed)
    sp = SpinSpace(two_S)
    v = rng.normal(size=sp.dim) + 1j * rng.normal(size=sp.dim)
    psi = StateVector(sp, v)
    H = rng.normal(size=(sp.dim, sp.dim)) + 1j * rng.normal(size=(sp.dim, sp.dim))
    from mustates.hilbert import Operator
    op = Operator(sp, H + H.conj().T)
    assert abs(expectation(psi, op).imag) < 1e-12 * max(1, np.abs(op.matrix).max())


def test_basis_state_tuple_index():
    from mustates.hilbert import ProductSpace
    prod = ProductSpace((fock_space(2), fock_space(3)))
    s = basis_state(prod, (1, 2))
    assert np.flatnonzero(s.amplitudes).tolist() == [1 * 4 + 2]
