"""Profile-grounded interviewee simulation.

Two interchangeable responders: a model-backed roleplayer constrained to a
profile, and a deterministic scripted responder for offline runs. Both expose
``respond(transcript, question) -> str``.
"""

from __future__ import annotations

import logging
import re
from typing import Optional

from . import prompts
from .gateway import Gateway, GatewayError, request
from .model import Transcript, UserProfile

log = logging.getLogger(__name__)

FIRST_TURN_REPLY = "I'm happy to start the interview."

# Question generators aimed at scripted responders embed the target subtopic
# as an inline marker so the responder can answer from the right profile
# section without any model in the loop.
SUBTOPIC_MARKER_RE = re.compile(r"\[s:([^\]]+)\]")


class SimulatedUser:
    """Model-backed interviewee grounded in a structured profile."""

    def __init__(self, gateway: Gateway, profile: UserProfile, temperature: float = 0.7):
        self.gateway = gateway
        self.profile = profile
        self.temperature = temperature

    def respond(self, transcript: Transcript, question: str) -> str:
        req = request(
            prompts.SIMULATOR_SYSTEM,
            prompts.simulator_user(self.profile, transcript, question),
            temperature=self.temperature,
        )
        try:
            reply = self.gateway.complete(req).strip()
        except GatewayError as exc:
            log.warning("simulator unavailable, giving a minimal reply: %s", exc)
            return "I'm not sure what to say about that."
        return reply or "I'm not sure what to say about that."


class ScriptedProfileResponder:
    """Deterministic interviewee: answers from the profile section named by
    the question's ``[s:<subtopic_id>]`` marker, cycling through its facts."""

    def __init__(self, profile: UserProfile):
        self.profile = profile
        self._fact_cursor: dict = {}

    def respond(self, transcript: Transcript, question: str) -> str:
        match = SUBTOPIC_MARKER_RE.search(question)
        if match is None:
            if len(transcript.turns) <= 1:
                return FIRST_TURN_REPLY
            return "I don't have anything specific to add there."
        subtopic_id = match.group(1)
        section = self.profile.section_for(subtopic_id)
        if section is None or not section.facts:
            return f"Regarding that, I have covered what I know about {subtopic_id}."
        i = self._fact_cursor.get(subtopic_id, 0)
        fact = section.facts[min(i, len(section.facts) - 1)]
        self._fact_cursor[subtopic_id] = i + 1
        return fact


def make_responder(
    profile: UserProfile, gateway: Optional[Gateway] = None, scripted: bool = False
):
    if scripted or gateway is None:
        return ScriptedProfileResponder(profile)
    return SimulatedUser(gateway, profile)
