"""
Shared fixtures for the ESSI test suite
"""

import pytest

from essi.core.basis import EssiParams, PairConvention
from essi.utils.config import config


@pytest.fixture(autouse=True)
def restore_config():
    """Each test sees the default configuration"""
    original_file = config.config_file
    yield
    config.reload(original_file)


@pytest.fixture
def five_spin_params():
    return EssiParams(n=5, omega0=1.0, coupling_A=0.3, coupling_B=0.7)


@pytest.fixture(params=[PairConvention.UNORDERED, PairConvention.ORDERED],
                ids=["unordered", "ordered"])
def convention(request):
    return request.param


@pytest.fixture
def coupling_csv(tmp_path):
    """Three spins, every pair listed once"""
    path = tmp_path / "couplings.csv"
    path.write_text(
        "f,j,A_fj,B_fj\n"
        "1,2,1.0,0.5\n"
        "1,3,2.0,-0.25\n"
        "2,3,3.0,0.75\n",
        encoding="utf-8",
    )
    return path
