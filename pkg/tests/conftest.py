import pytest

from agrisim import pipeline
from agrisim.scenario import load_default_scenario


@pytest.fixture(scope="session")
def default_scenario():
    return load_default_scenario()


@pytest.fixture(scope="session")
def default_run(default_scenario, tmp_path_factory):
    """One shared full-pipeline run of the default scenario with artifacts."""
    out_dir = tmp_path_factory.mktemp("default_run")
    return pipeline.run_season(default_scenario, out_dir=out_dir)
