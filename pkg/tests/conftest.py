from pathlib import Path

import pytest

from crossdep import config
from crossdep.dependencies import build_graph
from crossdep.seed_data import load_seed_bundle

FIXTURES = Path(__file__).resolve().parent / "fixtures"
MALFORMED = FIXTURES / "malformed"
SEEDS = config.DATA_DIRECTORY / "seeds"
SCENARIOS = config.SCENARIOS_DIRECTORY
RULES = config.RULES_DIRECTORY


@pytest.fixture(scope="session")
def bundle():
    return load_seed_bundle(SEEDS)


@pytest.fixture(scope="session")
def seed_graph(bundle):
    return build_graph(bundle.ontologies, bundle.links)
