import json
from importlib import resources

import pytest
from hypothesis import HealthCheck, settings

from gtype.curves import EllipticCurve

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def fixture_data():
    return json.loads(resources.files("gtype").joinpath("data/curves.json").read_text())


@pytest.fixture(scope="session")
def curve(fixture_data):
    def get(label):
        return EllipticCurve(fixture_data["curves"][label]["ainvs"], label=label)
    return get
