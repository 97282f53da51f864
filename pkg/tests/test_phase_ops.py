import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscinv import phase_ops as po
from oscinv.errors import ContractError
from oscinv.operators import OperatorMatrix


def test_sg_dim3():
    E, Ed = po.susskind_glogower(3)
    np.testing.assert_array_equal((Ed @ E).entries, np.diag([0, 1, 1]))
    np.testing.assert_array_equal((E @ Ed).entries, np.diag([1, 1, 0]))
    e1 = np.array([0, 1, 0])
    np.testing.assert_array_equal(E.entries @ e1, [1, 0, 0])


@pytest.mark.parametrize("dim", [2, 4, 16, 64, 200])
def test_sg_lower_identity_exact(dim):
    E, Ed = po.susskind_glogower(dim)
    target = np.eye(dim)
    target[0, 0] = 0
    assert np.array_equal((Ed @ E).entries, target)


def test_dim_too_small():
    for f in (po.susskind_glogower, po.pegg_barnett):
        with pytest.raises(ContractError):
            f(1)


@pytest.mark.parametrize("dim", [2, 4, 16, 64, 257])
def test_dirac_equals_sg(dim):
    D = po.dirac_phase(dim)
    assert np.array_equal(D.entries, po.susskind_glogower(dim)[0].entries)
    assert not D.is_unitary(1e-12)


@pytest.mark.parametrize("dim", [4, 16, 64])
@pytest.mark.parametrize("theta0", [0.0, 0.3, -1.2])
def test_pegg_barnett_spectrum(dim, theta0):
    op, basis = po.pegg_barnett(dim, theta0)
    assert op.is_hermitian(1e-12)
    ev = np.linalg.eigvalsh(op.entries)
    assert np.max(np.abs(ev - np.sort(theta0 + 2 * np.pi * np.arange(dim) / dim))) <= 1e-12
    U = np.column_stack(basis)
    assert np.max(np.abs(U.conj().T @ U - np.eye(dim))) <= 1e-12


def test_pegg_barnett_dim4():
    np.testing.assert_allclose(po.pegg_barnett_angles(4), [0, np.pi / 2, np.pi, 3 * np.pi / 2], atol=0)


def test_extended_window():
    ext = po.extended_phase_operator(-2, 2)
    M = ext.entries
    assert np.max(np.abs(M @ M.conj().T - np.eye(5))) <= 1e-15
    ev = np.linalg.eigvals(M)
    np.testing.assert_allclose(np.abs(ev), 1.0, atol=1e-12)
    np.testing.assert_allclose(ev**5, 1.0, atol=1e-12)  # fifth roots of unity


def test_extended_restriction():
    ext = po.extended_phase_operator(-3, 4)
    # rows/cols of n >= 0 are j >= 3: a one-sided shift identical to E
    np.testing.assert_array_equal(ext.entries[3:, 3:], po.susskind_glogower(5)[0].entries)
    # full window: E on the non-negative block plus the cyclic wrap entry
    assert ext.entries[-1, 0] == 1


def test_extended_open_window_defective():
    M = po.extended_phase_operator(-2, 2, cyclic=False).entries
    assert not OperatorMatrix(M).is_unitary(1e-6)


def test_extended_window_contract():
    with pytest.raises(ContractError):
        po.extended_phase_operator(0, 3)


@pytest.mark.parametrize("dim", [3, 10, 64])
@pytest.mark.parametrize("hbar", [1.0, 0.5])
def test_lerner(dim, hbar):
    E, _ = po.susskind_glogower(dim)
    assert po.lerner_check(E, hbar, dim) == 0.0
    assert po.lerner_check(OperatorMatrix(np.eye(dim, dtype=complex)), hbar) == pytest.approx(hbar)
    assert po.lerner_check(po.pegg_barnett_exponential(dim), hbar) >= 0.0


def test_lerner_dim_mismatch():
    with pytest.raises(ContractError):
        po.lerner_check(po.susskind_glogower(4)[0], 1.0, 5)


def test_number_state_distribution_uniform():
    dim = 8
    _, basis = po.pegg_barnett(dim)
    psi = np.zeros(dim)
    psi[3] = 1
    d = po.phase_distribution(psi, basis)
    np.testing.assert_allclose(d.probabilities, 1 / dim, atol=1e-15)


def test_phase_state_distribution_delta():
    _, basis = po.pegg_barnett(6, 0.2)
    d = po.phase_distribution(basis[4], basis, po.pegg_barnett_angles(6, 0.2))
    np.testing.assert_allclose(d.probabilities, np.eye(6)[4], atol=1e-14)


def test_two_state_distribution():
    _, basis = po.pegg_barnett(2)
    d = po.phase_distribution(np.array([1, 1]) / np.sqrt(2), basis)
    np.testing.assert_allclose(d.probabilities, np.cos(d.angles / 2) ** 2, atol=1e-15)


def test_distribution_needs_normalized_state():
    _, basis = po.pegg_barnett(4)
    with pytest.raises(ContractError):
        po.phase_distribution(np.ones(4), basis)


@settings(max_examples=30, deadline=None)
@given(dim=st.integers(2, 24), seed=st.integers(0, 2**31))
def test_distribution_sums_to_one(dim, seed):
    g = np.random.default_rng(seed)
    psi = g.normal(size=dim) + 1j * g.normal(size=dim)
    psi /= np.linalg.norm(psi)
    _, basis = po.pegg_barnett(dim)
    d = po.phase_distribution(psi, basis)
    assert abs(d.probabilities.sum() - 1) <= 1e-12 and np.all(d.probabilities >= 0)
