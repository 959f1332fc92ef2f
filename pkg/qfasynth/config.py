"""
Runtime settings for qfasynth

Settings are resolved in layers: built-in defaults, then environment
variables, then an optional YAML file. Command-line flags are applied on top
by the CLI.

Environment:
    QFA_SYNTH_SEED          Default seed for searches and noisy simulation
    QFA_SYNTH_MAX_QUBITS    Elaboration/simulation qubit cap (default 12)

The CLI activates the resolved settings; library code reads the qubit cap
and tolerances through active().

YAML example:
    seed: 7
    shots: 2000
    noise_rate: 0.002
    tolerances:
      verify: 1.0e-9
"""

import dataclasses
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from qfasynth.errors import ConfigError

logger = logging.getLogger(__name__)

SEED_ENV = "QFA_SYNTH_SEED"
MAX_QUBITS_ENV = "QFA_SYNTH_MAX_QUBITS"

DEFAULT_SEED = 2024
DEFAULT_MAX_QUBITS = 12


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances used across the package"""

    gate: float = 1e-12
    circuit: float = 1e-10
    verify: float = 1e-9
    integral: float = 1e-9


@dataclass(frozen=True)
class Settings:
    seed: int = DEFAULT_SEED
    max_qubits: int = DEFAULT_MAX_QUBITS
    search_budget: int = 100_000
    shots: int = 1000
    noise_rate: float = 0.0
    strategy: str = "mottonen"
    tolerances: Tolerances = field(default_factory=Tolerances)

    def replace(self, **changes):
        """Return a copy with the given fields changed (None values ignored)"""
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


def default_seed():
    """Seed from QFA_SYNTH_SEED, falling back to the built-in default"""
    return _env_int(SEED_ENV, DEFAULT_SEED)


def max_qubits():
    """Qubit cap for elaboration and simulation"""
    return _env_int(MAX_QUBITS_ENV, DEFAULT_MAX_QUBITS)


def _from_mapping(base, data, source):
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping")

    known = {f.name for f in dataclasses.fields(Settings)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"{source}: unknown keys {', '.join(unknown)}")

    values = dict(data)
    if "tolerances" in values:
        tol = values["tolerances"] or {}
        if not isinstance(tol, dict):
            raise ConfigError(f"{source}: 'tolerances' must be a mapping")
        tol_known = {f.name for f in dataclasses.fields(Tolerances)}
        bad = sorted(set(tol) - tol_known)
        if bad:
            raise ConfigError(f"{source}: unknown tolerance keys {', '.join(bad)}")
        values["tolerances"] = dataclasses.replace(
            base.tolerances, **{k: float(v) for k, v in tol.items()})

    try:
        settings = dataclasses.replace(base, **values)
    except TypeError as e:
        raise ConfigError(f"{source}: {e}") from None

    if not 0.0 <= float(settings.noise_rate) <= 1.0:
        raise ConfigError(f"{source}: noise_rate must be in [0, 1]")
    if settings.shots < 1 or settings.search_budget < 1:
        raise ConfigError(f"{source}: shots and search_budget must be positive")
    if settings.max_qubits < 1:
        raise ConfigError(f"{source}: max_qubits must be positive")
    return settings


def load_settings(path=None):
    """
    Resolve settings from defaults, environment and an optional YAML file.

    Args:
        path: YAML file path, or None

    Returns:
        Settings instance
    """
    settings = Settings(seed=default_seed(), max_qubits=max_qubits())
    if path is None:
        return settings

    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None

    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML ({e})") from None

    if data is None:
        return settings

    logger.debug("loaded config %s with keys %s", path, sorted(data) if isinstance(data, dict) else data)
    return _from_mapping(settings, data, str(path))


_active = None


def activate(settings):
    """
    Make settings the process-wide defaults.

    The elaboration cap and the numerical tolerances are read from the active
    settings. Passing None goes back to defaults and environment.
    """
    global _active
    _active = settings
    if settings is not None:
        logger.debug("active settings: max_qubits=%d tolerances=%s",
                     settings.max_qubits, settings.tolerances)


def active():
    """Settings activated by the CLI, else defaults and environment"""
    if _active is not None:
        return _active
    return Settings(seed=default_seed(), max_qubits=max_qubits())


def tolerances():
    return active().tolerances
