import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscinv.coefficients import (
    CATALOG,
    CoefficientProfile,
    caldirola_kanai,
    constant,
    cross_term,
    effective_frequency_sq,
    from_catalog,
    hamiltonian_value,
    pumped,
)
from oscinv.errors import OutOfDomainError


def test_constant_frequency():
    assert effective_frequency_sq(constant(1.3), 0.7) == pytest.approx(1.69, abs=1e-15)


def test_cross_term_frequency_removes_y_squared():
    # XZ - Y^2 with Z = w0^2 + y0^2
    assert effective_frequency_sq(cross_term(1.0, 0.5), 3.0) == pytest.approx(1.0, abs=1e-14)


def test_caldirola_kanai_frequency_is_constant():
    prof = caldirola_kanai(0.2, 1.0)
    t = np.linspace(-10, 10, 7)
    np.testing.assert_allclose(effective_frequency_sq(prof, t), 1.0, atol=1e-13)


def test_pumped_frequency():
    prof = pumped(1.0, 0.1, 2.0)
    t = np.linspace(0, 5, 11)
    np.testing.assert_allclose(effective_frequency_sq(prof, t), 1 + 0.1 * np.cos(2 * t), atol=1e-15)


def test_finite_difference_fallback_matches_closed_form():
    g = 0.3
    full = caldirola_kanai(g)
    bare = CoefficientProfile("ck_fd", full.X, full.Y, full.Z)
    t = np.linspace(-5, 5, 9)
    np.testing.assert_allclose(bare.dx(t), full.dx(t), rtol=1e-8)
    np.testing.assert_allclose(bare.omega_sq(t), full.omega_sq(t), rtol=1e-8)


def test_nonpositive_mass_rejected():
    with pytest.raises(ValueError):
        CoefficientProfile("bad", lambda t: np.cos(t), lambda t: 0 * t, lambda t: 1 + 0 * t, (0.0, 10.0))


def test_inconsistent_derivative_rejected():
    with pytest.raises(ValueError):
        CoefficientProfile(
            "bad", lambda t: np.exp(t), lambda t: 0 * t, lambda t: 1 + 0 * t, (0.0, 1.0), dX=lambda t: 2 * np.exp(t)
        )


def test_out_of_domain():
    with pytest.raises(OutOfDomainError):
        effective_frequency_sq(constant(), 1e3)
    with pytest.raises(OutOfDomainError):
        hamiltonian_value(constant(), 0.0, 0.0, -101.0)


def test_catalog_lookup():
    assert set(CATALOG) == {"constant", "caldirola_kanai", "pumped", "cross_term"}
    assert from_catalog("pumped", epsilon=0.2).params["epsilon"] == 0.2
    with pytest.raises(KeyError):
        from_catalog("nope")


@settings(max_examples=50, deadline=None)
@given(
    q=st.floats(-5, 5), p=st.floats(-5, 5), t=st.floats(-50, 50),
    name=st.sampled_from(sorted(CATALOG)),
)
def test_hamiltonian_is_quadratic_form(q, p, t, name):
    prof = from_catalog(name)
    x, y, z = prof.x(t), prof.y(t), prof.z(t)
    expected = 0.5 * x * p * p + y * p * q + 0.5 * z * q * q
    assert hamiltonian_value(prof, q, p, t) == pytest.approx(float(expected), rel=1e-14, abs=1e-14)
    assert hamiltonian_value(prof, 2 * q, 2 * p, t) == pytest.approx(4 * float(expected), rel=1e-12, abs=1e-12)
