import json
import os

import pytest

from interviewkit.gateway import Gateway
from interviewkit.mocks import covering_mock_backend
from interviewkit.model import TopicGuide, UserProfile, load_guide, validate_guide

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


@pytest.fixture
def guide() -> TopicGuide:
    return load_guide(os.path.join(DATA_DIR, "guides", "workforce_ai.json"))


@pytest.fixture
def clerk_profile() -> UserProfile:
    with open(os.path.join(DATA_DIR, "profiles", "clerk.json"), "r", encoding="utf-8") as fh:
        return UserProfile.from_dict(json.load(fh))


@pytest.fixture
def small_guide() -> TopicGuide:
    return validate_guide(
        TopicGuide.from_dict(
            {
                "topics": [
                    {
                        "id": "1",
                        "title": "Work history",
                        "subtopics": ["Current role", "Prior roles"],
                    },
                    {
                        "id": "2",
                        "title": "Tools",
                        "subtopics": ["Daily software", "Automation wishes"],
                    },
                ]
            }
        )
    )


@pytest.fixture
def mock_gateway() -> Gateway:
    return Gateway(covering_mock_backend())
