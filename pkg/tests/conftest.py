import numpy as np
import pytest

from oscinv.classical import adiabatic_seed, integrate_mode, normalize_wronskian
from oscinv.coefficients import CATALOG, from_catalog
from oscinv.invariants import InvariantFrame

PROFILE_NAMES = sorted(CATALOG)
SPAN = (0.0, 20.0)


def make_mode(name, t_span=SPAN, rel_tol=1e-10, **params):
    profile = from_catalog(name, **params)
    u0, ud0 = adiabatic_seed(profile, t_span[0])
    return normalize_wronskian(integrate_mode(profile, u0, ud0, t_span, rel_tol))


_FRAMES = {}


def frame_for(name):
    # modes are immutable, so one integration per profile is shared across tests
    if name not in _FRAMES:
        _FRAMES[name] = InvariantFrame(make_mode(name))
    return _FRAMES[name]


@pytest.fixture(params=PROFILE_NAMES)
def profile_name(request):
    return request.param


@pytest.fixture
def frame(profile_name):
    return frame_for(profile_name)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
