import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscinv import bogoliubov as bg
from oscinv.classical import integrate_mode, normalize_wronskian
from oscinv.errors import ContractError, UnsupportedSignatureError
from oscinv.operators import ladder_matrices

from conftest import SPAN, make_mode


def _second_mode(mode, r, phi):
    # v = cosh r u + e^{i phi} sinh r u*, seeded at the start of the span
    u0, ud0 = mode.u_and_udot(SPAN[0])
    c, s = np.cosh(r), np.exp(1j * phi) * np.sinh(r)
    return normalize_wronskian(integrate_mode(mode.profile, c * u0 + s * np.conj(u0), c * ud0 + s * np.conj(ud0), SPAN))


@pytest.mark.parametrize("name", ["pumped", "caldirola_kanai"])
def test_coefficients_between_modes(name):
    u = make_mode(name)
    v = _second_mode(u, 0.4, 0.9)
    t = np.linspace(*SPAN, 41)
    alpha, beta = bg.coefficients_between_modes(u, v, t)
    # v = alpha* u - beta* u*
    assert np.max(np.abs(alpha - np.cosh(0.4))) < 1e-8
    assert np.max(np.abs(beta + np.exp(-0.9j) * np.sinh(0.4))) < 1e-8
    assert np.max(np.abs(np.abs(alpha) ** 2 - np.abs(beta) ** 2 - 1)) <= 1e-9
    c = bg.coefficients_between_modes(u, v)
    assert c.check() is c


def test_identical_modes_give_identity():
    u = make_mode("cross_term")
    c = bg.coefficients_between_modes(u, u, 4.0)
    # alpha tracks the Wronskian, which drifts by ~1e-10 with rel_tol 1e-10
    assert c.alpha == pytest.approx(1.0, abs=1e-9) and abs(c.beta) < 1e-9


def test_unnormalized_mode_rejected():
    u = make_mode("constant")
    raw = integrate_mode(u.profile, 2.0, -2j, SPAN)
    with pytest.raises(ContractError):
        bg.coefficients_between_modes(u, raw)


def test_constraint_check():
    with pytest.raises(ContractError):
        bg.BogoliubovCoefficients(1.0, 0.5).check()


def test_fixed_point():
    spec = bg.squeeze_parameters(np.sinh(1.0), np.cosh(1.0))
    assert spec.r == pytest.approx(0.5, abs=1e-8)
    assert spec.delta == pytest.approx(np.pi, abs=1e-8)
    assert spec.B_tilde == pytest.approx(1.0, abs=1e-8)
    # the halved-B variant evaluates to about -0.19 here
    assert spec.B_tilde_halved == pytest.approx(-0.1905, abs=1e-3)


def test_zero_A_is_unsqueezed():
    spec = bg.squeeze_parameters(0.0, 2.0)
    assert (spec.r, spec.delta, spec.B_tilde) == (0.0, 0.0, 2.0)


@pytest.mark.parametrize("A,B", [(1.0, 1.0), (2.0, 1.0), (0.5j, -1.0)])
def test_unsupported_signature(A, B):
    with pytest.raises(UnsupportedSignatureError):
        bg.squeeze_parameters(A, B)


@settings(max_examples=60, deadline=None)
@given(mag=st.floats(0.0, 0.99), ph=st.floats(-np.pi, np.pi), B=st.floats(0.1, 10.0))
def test_B_tilde_is_sqrt(mag, ph, B):
    A = mag * B * np.exp(1j * ph)
    spec = bg.squeeze_parameters(A, B)
    assert spec.B_tilde == pytest.approx(np.sqrt(B * B - abs(A) ** 2), abs=1e-8 * max(1, B))
    assert -np.pi < spec.delta <= np.pi


def test_B_tilde_matches_spectrum():
    A, B = 0.3 - 0.5j, 1.2
    spec = bg.squeeze_parameters(A, B)
    ev = bg.invariant_spectrum(A, B, 5)
    np.testing.assert_allclose(ev, spec.B_tilde * (np.arange(5) + 0.5), atol=1e-10)


def test_canonical_form_fixed_point():
    assert bg.canonical_form_check(np.sinh(1.0), np.cosh(1.0), 60) <= 1e-10


def test_raw_truncated_squeeze_is_inaccurate():
    # exponentiating inside 60 states only is not enough for r = 0.5
    assert bg.canonical_form_check(np.sinh(1.0), np.cosh(1.0), 60, work_dim=60) > 1e-6
    with pytest.raises(ContractError):
        bg.canonical_form_check(0.1, 1.0, 60, work_dim=30)


def test_squeeze_operator_unitary_on_low_block():
    S = bg.squeeze_operator_matrix(0.3 * np.exp(0.4j), 120).entries
    blk = (S.conj().T @ S)[:20, :20]
    assert np.max(np.abs(blk - np.eye(20))) < 1e-12


def test_vacuum_overlap_and_compose():
    r = 0.7
    c = bg.BogoliubovCoefficients(np.cosh(r), np.sinh(r))
    assert bg.vacuum_overlap(c, 120) == pytest.approx(1 / np.cosh(r), abs=1e-10)
    inv = bg.BogoliubovCoefficients(np.cosh(r), -np.sinh(r))
    both = bg.compose(c, inv)
    assert both.alpha == pytest.approx(1.0) and abs(both.beta) < 1e-14


def test_apply_bogoliubov_commutator():
    c = bg.BogoliubovCoefficients(np.cosh(0.3) * np.exp(0.2j), np.sinh(0.3))
    a, ad, _ = ladder_matrices(30)
    b, bd = bg.apply_bogoliubov(c, a, ad)
    comm = (b @ bd).entries - (bd @ b).entries
    assert np.max(np.abs(comm[:28, :28] - np.eye(28))) < 1e-12
