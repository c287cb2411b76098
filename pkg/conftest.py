import os
import sys
from pathlib import Path

import hypothesis
import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT))

np.seterr(all="warn")

hypothesis.settings.register_profile("default", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the long acceptance reproductions")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running relaxation sweeps (enable with --runslow)")
    config.addinivalue_line("markers", "solver: needs a PSD-capable cvxpy solver")


def pytest_collection_modifyitems(config, items):
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    try:
        from solvers.cvxpy_backend import installed_psd_solvers

        have_solver = bool(installed_psd_solvers())
    except ImportError:
        have_solver = False
    skip_solver = pytest.mark.skip(reason="no PSD-capable cvxpy solver installed")
    for item in items:
        if "slow" in item.keywords and not config.getoption("--runslow"):
            item.add_marker(skip_slow)
        if "solver" in item.keywords and not have_solver:
            item.add_marker(skip_solver)


@pytest.fixture
def problems_dir() -> Path:
    return ROOT / "problems"
