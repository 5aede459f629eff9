import pytest

from ecsnet.scenario import load_bundled, parse_scenario


@pytest.fixture(scope="session")
def hco():
    return parse_scenario(load_bundled("hco.scenario")).spec


@pytest.fixture(scope="session")
def feeding():
    return parse_scenario(load_bundled("lymnaea.scenario")).spec
