"""
pytest configuration for qfasynth tests
"""

import os

import numpy as np
import pytest

from qfasynth import config
from qfasynth.config import MAX_QUBITS_ENV, SEED_ENV

DEFAULT_TRAJECTORIES = int(os.environ.get("QFA_TEST_TRAJECTORIES", "200"))


def pytest_addoption(parser):
    """Add custom command-line options"""
    parser.addoption(
        "--trajectories",
        type=int,
        default=DEFAULT_TRAJECTORIES,
        help="Monte-Carlo trajectories for noisy simulation tests"
    )


@pytest.fixture(scope="session")
def trajectories(request):
    """Trajectory count for noisy tests"""
    return request.config.getoption("--trajectories")


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep a developer's QFA_SYNTH_* variables out of the tests"""
    monkeypatch.delenv(SEED_ENV, raising=False)
    monkeypatch.delenv(MAX_QUBITS_ENV, raising=False)
    config.activate(None)
    yield
    config.activate(None)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

