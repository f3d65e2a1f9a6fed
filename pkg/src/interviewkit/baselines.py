"""Reference interviewer strategies for comparison runs.

Three scripted-control strategies share the session interface of the adaptive
orchestrator (``start()`` / ``submit_response()``):

- ``roleplay``: fixed guide-order traversal; an LLM judge may re-ask a
  subtopic up to 3 times when the answer lacks specifics.
- ``interviewgpt``: fixed guide-order traversal, one question per subtopic,
  neutral survey style.
- ``mimitalk``: guide-order traversal with a supervisor model consulted every
  2 turns whose guidance is injected into the interviewer prompt.

These strategies keep no per-subtopic cursor state beyond their traversal
position, so their notes attach at session level.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Any, Dict, Optional

from . import prompts
from .gateway import Gateway, GatewayError, request
from .interviewer import FAREWELL, GREETING, SessionEndedError
from .model import InterviewAgenda, Note, Subtopic, TopicGuide, Transcript, validate_guide

log = logging.getLogger(__name__)

DEFAULT_TURN_CAP = 72
ROLEPLAY_MAX_ATTEMPTS = 3
MIMITALK_SUPERVISOR_PERIOD = 2


class StrategyId(str, Enum):
    SPARKME = "sparkme"
    LLM_ROLEPLAY = "roleplay"
    INTERVIEW_GPT = "interviewgpt"
    MIMI_TALK = "mimitalk"


class BaselineSession:
    """Shared turn plumbing for the scripted-control strategies."""

    system_prompt = ""

    def __init__(self, guide: TopicGuide, gateway: Gateway, turn_cap: int = DEFAULT_TURN_CAP):
        self.guide = validate_guide(guide)
        self.gateway = gateway
        self.turn_cap = turn_cap
        self.agenda = InterviewAgenda.for_guide(self.guide)
        self.transcript = Transcript()
        self.subtopics = list(self.agenda.guide.subtopics())
        self.position = 0  # traversal index into self.subtopics
        self.ended = False

    # -- lifecycle

    def start(self) -> str:
        if self.transcript.turns:
            raise RuntimeError("session already started")
        question = self._next_question()
        if question is None:
            self.ended = True
            return FAREWELL
        message = f"{GREETING}\n\nTo begin: {question}"
        self.transcript.append_question(message)
        return message

    def submit_response(self, response: str) -> Dict[str, Any]:
        if self.ended:
            raise SessionEndedError("session has ended")
        self.transcript.complete_turn(response)
        self._record_notes(response)
        completed = len(self.transcript.completed_turns())
        if completed >= self.turn_cap:
            self.ended = True
            return {"message": FAREWELL, "ended": True, "turn": completed}
        question = self._next_question()
        if question is None:
            self.ended = True
            return {"message": FAREWELL, "ended": True, "turn": completed}
        self.transcript.append_question(question)
        return {"message": question, "ended": False, "turn": completed}

    # -- hooks

    def _next_question(self) -> Optional[str]:
        raise NotImplementedError

    def _record_notes(self, response: str) -> None:
        pass

    # -- helpers

    def _current_subtopic(self) -> Optional[Subtopic]:
        if self.position >= len(self.subtopics):
            return None
        return self.subtopics[self.position]

    def _add_session_note(self, text: str) -> None:
        text = text.strip()
        if not text:
            return
        self.agenda.add_note(
            Note(text=text, source_turn=len(self.transcript.turns)), len(self.transcript.turns)
        )

    def _target_context(self, subtopic: Subtopic) -> str:
        return (
            f"TARGET_SUBTOPIC_ID: {subtopic.id}\n"
            f"TARGET_SUBTOPIC: {subtopic.description}\n\n"
            f"GUIDE:\n{prompts.render_guide_outline(self.agenda, with_status=False)}\n\n"
            f"TRANSCRIPT:\n{prompts.render_transcript(self.transcript, window=6)}\n"
        )


class RoleplaySession(BaselineSession):
    """Guide-order traversal with judged re-asks (at most 3 tries per subtopic).

    One model call per turn handles both roles: it judges the latest response
    (satisfied / reask plus notes) and phrases the next question. A subtopic
    is re-asked while the judge is unsatisfied, up to ``max_attempts`` total
    questions, then the traversal moves on regardless.
    """

    def __init__(
        self,
        guide: TopicGuide,
        gateway: Gateway,
        turn_cap: int = DEFAULT_TURN_CAP,
        max_attempts: int = ROLEPLAY_MAX_ATTEMPTS,
    ):
        super().__init__(guide, gateway, turn_cap)
        self.max_attempts = max_attempts
        self.attempts = 0  # questions asked about the current subtopic
        self._pending_reask: Optional[str] = None

    def _record_notes(self, response: str) -> None:
        subtopic = self._current_subtopic()
        if subtopic is None:
            return
        data = self._judge(subtopic, response)
        if data is not None:
            self._add_session_note(data.get("notes", ""))
        reask = (
            data is not None
            and not data.get("satisfied", True)
            and data.get("decision") == "reask"
        )
        if reask and self.attempts < self.max_attempts:
            self._pending_reask = data.get("question_to_ask") or data.get("assistant_message")
        else:
            self.position += 1
            self.attempts = 0

    def _judge(self, subtopic: Subtopic, response: str) -> Optional[Dict[str, Any]]:
        try:
            return self.gateway.complete_json(
                request(
                    prompts.ROLEPLAY_SYSTEM,
                    self._target_context(subtopic)
                    + f"\nLATEST_RESPONSE: {response}\n"
                    + f"ATTEMPT: {self.attempts} of {self.max_attempts}\n",
                    temperature=0.7,
                    response_schema=prompts.ROLEPLAY_SCHEMA,
                )
            )
        except GatewayError as exc:
            log.warning("roleplay judge unavailable, moving on: %s", exc)
            return None

    def _next_question(self) -> Optional[str]:
        subtopic = self._current_subtopic()
        if subtopic is None:
            return None
        self.attempts += 1
        if self._pending_reask is not None:
            question, self._pending_reask = self._pending_reask, None
            return question
        try:
            data = self.gateway.complete_json(
                request(
                    prompts.ROLEPLAY_SYSTEM,
                    self._target_context(subtopic)
                    + f"\nATTEMPT: {self.attempts} of {self.max_attempts}\n",
                    temperature=0.7,
                    response_schema=prompts.ROLEPLAY_SCHEMA,
                )
            )
        except GatewayError as exc:
            log.warning("roleplay interviewer unavailable, using plain phrasing: %s", exc)
            return f"Could you tell me about this: {subtopic.description}? [s:{subtopic.id}]"
        return data["assistant_message"]


class InterviewGptSession(BaselineSession):
    """One neutral question per subtopic, in guide order."""

    def _next_question(self) -> Optional[str]:
        subtopic = self._current_subtopic()
        if subtopic is None:
            return None
        try:
            data = self.gateway.complete_json(
                request(
                    prompts.INTERVIEWGPT_SYSTEM,
                    self._target_context(subtopic),
                    temperature=0.7,
                    response_schema=prompts.INTERVIEWGPT_SCHEMA,
                )
            )
        except GatewayError as exc:
            log.warning("interviewgpt unavailable, using plain phrasing: %s", exc)
            self._last_notes = ""
            return f"Could you tell me about this: {subtopic.description}? [s:{subtopic.id}]"
        self._last_notes = data.get("notes", "")
        return data["assistant_message"]

    def _record_notes(self, response: str) -> None:
        self._add_session_note(getattr(self, "_last_notes", ""))
        self.position += 1


class MimiTalkSession(BaselineSession):
    """Guide-order traversal with periodic supervisor guidance."""

    def __init__(
        self,
        guide: TopicGuide,
        gateway: Gateway,
        turn_cap: int = DEFAULT_TURN_CAP,
        supervisor_period: int = MIMITALK_SUPERVISOR_PERIOD,
    ):
        super().__init__(guide, gateway, turn_cap)
        self.supervisor_period = supervisor_period
        self.guidance = ""
        self.supervisor_turns: list = []

    def _next_question(self) -> Optional[str]:
        subtopic = self._current_subtopic()
        if subtopic is None:
            return None
        completed = len(self.transcript.completed_turns())
        if completed > 0 and completed % self.supervisor_period == 0:
            self._consult_supervisor(completed)
        context = self._target_context(subtopic) + f"\nSUPERVISOR_GUIDANCE: {self.guidance or '(none yet)'}\n"
        try:
            data = self.gateway.complete_json(
                request(
                    prompts.MIMITALK_INTERVIEWER_SYSTEM,
                    context,
                    temperature=0.7,
                    response_schema=prompts.MIMITALK_INTERVIEWER_SCHEMA,
                )
            )
        except GatewayError as exc:
            log.warning("mimitalk interviewer unavailable, using plain phrasing: %s", exc)
            self._last_notes = ""
            return f"Could you tell me about this: {subtopic.description}? [s:{subtopic.id}]"
        self._last_notes = data.get("notes", "")
        return data["question_to_ask"]

    def _consult_supervisor(self, completed: int) -> None:
        try:
            self.guidance = self.gateway.complete(
                request(
                    prompts.MIMITALK_SUPERVISOR_SYSTEM,
                    f"GUIDE:\n{prompts.render_guide_outline(self.agenda, with_status=False)}\n\n"
                    f"TRANSCRIPT:\n{prompts.render_transcript(self.transcript)}\n",
                    temperature=0.3,
                )
            ).strip()
            self.supervisor_turns.append(completed)
        except GatewayError as exc:
            log.warning("mimitalk supervisor unavailable, keeping prior guidance: %s", exc)

    def _record_notes(self, response: str) -> None:
        self._add_session_note(getattr(self, "_last_notes", ""))
        self.position += 1


def make_baseline_session(
    strategy: StrategyId, guide: TopicGuide, gateway: Gateway, turn_cap: int = DEFAULT_TURN_CAP
) -> BaselineSession:
    if strategy == StrategyId.LLM_ROLEPLAY:
        return RoleplaySession(guide, gateway, turn_cap)
    if strategy == StrategyId.INTERVIEW_GPT:
        return InterviewGptSession(guide, gateway, turn_cap)
    if strategy == StrategyId.MIMI_TALK:
        return MimiTalkSession(guide, gateway, turn_cap)
    raise ValueError(f"not a baseline strategy: {strategy}")
