"""Run configuration: a YAML file parsed and validated into :class:`RunConfig`.

Example::

    profile:
      name: pumped
      params: {omega0: 1.0, epsilon: 0.1, nu: 2.0}
    t_span: [0.0, 20.0]
    rel_tol: 1.0e-10
    hbar: 1.0
    n_max: 8
    dim: 16
    theta0: 0.0
    seed: 20240101
    seeds:                       # optional (u0, udot0) pairs; complex as "a+bj" or [re, im]
      - ["0.7071067811865476", "-0.7071067811865476j"]
    commands: [simulate, invariants-check, quantum-check, squeeze, phase-ops, report]
    squeeze: {A_re: 0.3, A_im: 0.1, B: 1.0}
    output_dir: out
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .classical import _RTOL_RANGE
from .coefficients import CATALOG, from_catalog
from .errors import ConfigError

__all__ = ["RunConfig", "COMMANDS", "load_config", "parse_config"]

COMMANDS = ("simulate", "invariants-check", "quantum-check", "squeeze", "phase-ops", "report")
OUTPUT_ENV = "OSCINV_OUTPUT_DIR"

_KNOWN_KEYS = {
    "profile", "t_span", "rel_tol", "hbar", "n_max", "dim", "theta0", "seed", "seeds",
    "commands", "squeeze", "output_dir", "n_trajectories", "n_bracket_points", "area_samples",
}


@dataclass(frozen=True)
class RunConfig:
    profile_name: str
    profile_params: dict
    t_span: tuple[float, float]
    seed: int
    commands: tuple[str, ...]
    output_dir: Path
    rel_tol: float = 1e-10
    hbar: float = 1.0
    n_max: int = 8
    dim: int = 16
    theta0: float = 0.0
    seeds: tuple = ()
    squeeze: dict = field(default_factory=lambda: {"A_re": 0.3, "A_im": 0.1, "B": 1.0})
    n_trajectories: int = 5
    n_bracket_points: int = 20
    area_samples: int = 1_000_000

    def make_profile(self):
        return from_catalog(self.profile_name, **self.profile_params)


def _complex(value, what):
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    try:
        return complex(str(value).replace(" ", "")) if isinstance(value, str) else complex(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{what}: cannot read {value!r} as a complex number") from None


def _require(raw, key):
    if key not in raw:
        raise ConfigError(f"missing required key {key!r}")
    return raw[key]


def parse_config(raw):
    """Validate a mapping (already parsed from YAML) into a RunConfig."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a mapping")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")

    prof = _require(raw, "profile")
    if isinstance(prof, str):
        name, params = prof, {}
    elif isinstance(prof, dict):
        name, params = prof.get("name"), dict(prof.get("params") or {})
    else:
        raise ConfigError("profile must be a name or {name, params}")
    if name not in CATALOG:
        raise ConfigError(f"unknown profile {name!r}; known: {sorted(CATALOG)}")
    try:
        profile = from_catalog(name, **params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"profile {name!r}: {exc}") from None

    seed = _require(raw, "seed")
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("seed must be an integer")

    span = raw.get("t_span", [0.0, 20.0])
    try:
        t_span = (float(span[0]), float(span[1]))
    except (TypeError, ValueError, IndexError):
        raise ConfigError(f"t_span must be [t0, t1], got {span!r}") from None
    if not t_span[0] < t_span[1]:
        raise ConfigError("t_span must be increasing")
    d0, d1 = profile.t_domain
    if t_span[0] < d0 or t_span[1] > d1:
        raise ConfigError(f"t_span outside profile domain {profile.t_domain}")

    rel_tol = float(raw.get("rel_tol", 1e-10))
    if not _RTOL_RANGE[0] <= rel_tol <= _RTOL_RANGE[1]:
        raise ConfigError(f"rel_tol={rel_tol} outside [{_RTOL_RANGE[0]:g}, {_RTOL_RANGE[1]:g}]")
    hbar = float(raw.get("hbar", 1.0))
    if not hbar > 0:
        raise ConfigError("hbar must be positive")
    n_max = int(raw.get("n_max", 8))
    if not 0 <= n_max <= 60:
        raise ConfigError("n_max must be in 0..60")
    dim = int(raw.get("dim", 16))
    if dim < 2:
        raise ConfigError("dim must be at least 2")

    commands = raw.get("commands") or []
    if isinstance(commands, str):
        commands = [commands]
    bad = [c for c in commands if c not in COMMANDS]
    if bad or not commands:
        raise ConfigError(f"commands must be a non-empty subset of {COMMANDS}, got {commands!r}")

    seeds = []
    for k, pair in enumerate(raw.get("seeds") or []):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ConfigError(f"seeds[{k}] must be a (u0, udot0) pair")
        seeds.append((_complex(pair[0], f"seeds[{k}][0]"), _complex(pair[1], f"seeds[{k}][1]")))

    sq = dict(raw.get("squeeze") or {"A_re": 0.3, "A_im": 0.1, "B": 1.0})
    try:
        sq = {"A_re": float(sq.get("A_re", 0.0)), "A_im": float(sq.get("A_im", 0.0)), "B": float(sq["B"])}
    except (KeyError, TypeError, ValueError):
        raise ConfigError("squeeze needs numeric A_re, A_im, B") from None

    out = os.environ.get(OUTPUT_ENV) or raw.get("output_dir") or "oscinv-out"
    out = Path(out)

    counts = {}
    for key, default, lo in (("n_trajectories", 5, 1), ("n_bracket_points", 20, 1), ("area_samples", 1_000_000, 100_000)):
        val = raw.get(key, default)
        if isinstance(val, bool) or not isinstance(val, int) or val < lo:
            raise ConfigError(f"{key} must be an integer >= {lo}")
        counts[key] = val

    return RunConfig(
        profile_name=name,
        profile_params=params,
        t_span=t_span,
        seed=seed,
        commands=tuple(commands),
        output_dir=out,
        rel_tol=rel_tol,
        hbar=hbar,
        n_max=n_max,
        dim=dim,
        theta0=float(raw.get("theta0", 0.0)),
        seeds=tuple(seeds),
        squeeze=sq,
        **counts,
    )


def load_config(path):
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from None
    return parse_config(raw)
