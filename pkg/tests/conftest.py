import pytest

from laacsim.occluder import table1_presets
from laacsim.simulate import SimConfig, run_script


@pytest.fixture(scope="session")
def presets():
    return table1_presets()


@pytest.fixture(scope="session")
def zero_noise_records(presets):
    """One zero-noise scripted record per preset, keyed by preset id."""
    cfg = SimConfig(nav_noise_sigma_N=0.0, deploy_noise_sigma_N=0.0, seed=0)
    return {p.preset_id: run_script(p, cfg) for p in presets}
