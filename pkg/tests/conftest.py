import pytest

from taskfsa.fixtures import load_model, load_transcript
from taskfsa.glm import GlmSession, ReplayBackend
from taskfsa.stepparse.lexicon import KEYWORDS


@pytest.fixture
def crossing_light_model():
    return load_model("crossing_light")


@pytest.fixture
def crossing_looks_model():
    return load_model("crossing_looks")


@pytest.fixture
def wifi_model():
    return load_model("wifi")


def replay_session(name: str) -> GlmSession:
    return GlmSession(ReplayBackend(load_transcript(name)), keywords=KEYWORDS)


@pytest.fixture
def crossroad_glm():
    return replay_session("crossroad")


@pytest.fixture
def crossroad_light_glm():
    return replay_session("crossroad_light")


@pytest.fixture
def wifi_glm():
    return replay_session("wifi")
