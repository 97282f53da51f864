import numpy as np
import pytest

from oscinv.classical import (
    adiabatic_seed,
    evolve_phase_point,
    integrate_mode,
    integrate_real_pair,
    normalize_wronskian,
    wronskian,
)
from oscinv.coefficients import caldirola_kanai, constant, from_catalog
from oscinv.errors import ContractError, DegenerateModeError, OutOfDomainError

from conftest import PROFILE_NAMES, SPAN, make_mode


@pytest.mark.parametrize("w0", [0.5, 1.0, 2.3])
def test_constant_profile_matches_plane_wave(w0):
    mode = make_mode("constant", omega0=w0)
    t = np.linspace(*SPAN, 401)
    exact = np.exp(-1j * w0 * t) / np.sqrt(2 * w0)
    assert np.max(np.abs(mode.u(t) - exact)) < 1e-8


def test_damped_oscillator_closed_form():
    g, w0 = 0.2, 1.0
    wbar = np.sqrt(w0**2 - g**2 / 4)
    prof = caldirola_kanai(g, w0)
    # u = C e^{-gt/2 - i wbar t}, |C|^2 = 1/(2 wbar)
    c = 1 / np.sqrt(2 * wbar)
    mode = normalize_wronskian(integrate_mode(prof, c, c * (-g / 2 - 1j * wbar), SPAN))
    t = np.linspace(*SPAN, 301)
    exact = c * np.exp(-g * t / 2 - 1j * wbar * t)
    assert np.max(np.abs(mode.u(t) - exact)) < 1e-8


@pytest.mark.parametrize("name", PROFILE_NAMES)
def test_wronskian_drift(name):
    mode = make_mode(name)
    t = np.linspace(*SPAN, 1001)
    assert np.max(np.abs(wronskian(mode, t) - 1j)) <= 1e-8


def test_mode_equation_residual():
    # second-order form u'' = (X'/X) u' - Omega^2 u, checked by differencing dense output
    prof = from_catalog("pumped")
    mode = make_mode("pumped")
    t, h = np.linspace(2, 18, 9), 1e-3
    udd = (mode.udot(t + h) - mode.udot(t - h)) / (2 * h)
    res = udd - (prof.dx(t) / prof.x(t)) * mode.udot(t) + prof.omega_sq(t) * mode.u(t)
    assert np.max(np.abs(res)) < 1e-6


def test_seed_inside_span_integrates_both_ways():
    prof = constant(1.0)
    u0, ud0 = np.exp(-5j) / np.sqrt(2), -1j * np.exp(-5j) / np.sqrt(2)
    mode = integrate_mode(prof, u0, ud0, SPAN, t_seed=5.0)
    t = np.array([0.0, 3.0, 5.0, 12.0, 20.0])
    assert np.max(np.abs(mode.u(t) - np.exp(-1j * t) / np.sqrt(2))) < 1e-8


def test_normalization_rescales_once():
    prof = constant(1.0)
    mode = integrate_mode(prof, 2.0, -2.0j, SPAN)
    assert wronskian(mode, 0.0) == pytest.approx(8j)
    norm = normalize_wronskian(mode)
    assert wronskian(norm, 0.0) == pytest.approx(1j, abs=1e-15)
    assert normalize_wronskian(norm) is norm


def test_real_mode_is_degenerate():
    mode = integrate_mode(constant(), 1.0, 0.0, SPAN)
    with pytest.raises(DegenerateModeError):
        normalize_wronskian(mode)


def test_wrong_orientation_rejected():
    mode = integrate_mode(constant(), 1 / np.sqrt(2), 1j / np.sqrt(2), SPAN)
    with pytest.raises(DegenerateModeError, match="orientation"):
        normalize_wronskian(mode)


def test_real_pair():
    prof = constant(1.0)
    # u1 = sin t, u2 = cos t: u1 u2' - u1' u2 = -1; swapping gives +1
    pair = integrate_real_pair(prof, (0.0, 1.0), (1.0, 0.0), SPAN)
    with pytest.raises(DegenerateModeError):
        normalize_wronskian(pair)
    pair = normalize_wronskian(integrate_real_pair(prof, (1.0, 0.0), (0.0, 1.0), SPAN))
    t = np.linspace(*SPAN, 51)
    assert np.max(np.abs(wronskian(pair, t) - 1.0)) < 1e-9
    np.testing.assert_allclose(pair.u1(t), np.cos(t), atol=1e-8)
    np.testing.assert_allclose(pair.u2(t), np.sin(t), atol=1e-8)


def test_real_pair_rejects_complex_seed():
    with pytest.raises(ContractError):
        integrate_real_pair(constant(), (1j, 0.0), (1.0, 0.0), SPAN)


@pytest.mark.parametrize("rtol", [1.0, 1e-3, 1e-14])
def test_rel_tol_range(rtol):
    with pytest.raises(ContractError):
        integrate_mode(constant(), 1.0, -1j, SPAN, rtol)


def test_span_outside_domain():
    with pytest.raises(OutOfDomainError):
        integrate_mode(constant(), 1.0, -1j, (0.0, 500.0))


def test_adiabatic_seed_is_normalized():
    prof = from_catalog("caldirola_kanai")
    mode = integrate_mode(prof, *adiabatic_seed(prof, 3.0), (3.0, 10.0))
    assert wronskian(mode, 3.0) == pytest.approx(1j, abs=1e-14)


def test_theta_u_is_continuous_and_matches_rate():
    # theta_u' = X / (2 rho^2) for a normalized mode
    prof = from_catalog("pumped")
    mode = make_mode("pumped")
    t = np.linspace(1, 19, 50)
    h = 1e-4
    rate = (mode.theta_u(t + h) - mode.theta_u(t - h)) / (2 * h)
    np.testing.assert_allclose(rate, prof.x(t) / (2 * mode.rho(t) ** 2), rtol=1e-6)
    assert mode.theta_u(20.0) > 15.0  # unwrapped, not confined to (-pi, pi]


def test_trajectory_conserves_energy_for_constant_profile():
    prof = constant(1.0)
    traj = evolve_phase_point(prof, 0.3, -0.4, SPAN)
    t = np.linspace(*SPAN, 101)
    q, p = traj.state(t)
    np.testing.assert_allclose(q, 0.3 * np.cos(t) - 0.4 * np.sin(t), atol=1e-8)
    np.testing.assert_allclose(0.5 * (q * q + p * p), 0.125, atol=1e-9)
