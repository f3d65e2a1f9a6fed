"""Per-turn action selection and question generation.

Action selection is deterministic given the agenda, the transcript, and any
planner suggestions; only the question wording comes from the model. This
keeps the turn loop auditable and makes every policy decision testable
offline.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from . import prompts
from .gateway import Gateway, GatewayError, request
from .model import InterviewAgenda, Origin, Status, Subtopic, Transcript

log = logging.getLogger(__name__)

PII_NOTICE = (
    "Please avoid sharing personally identifying details such as your name, "
    "employer, address, or contact information during this interview."
)

GREETING = (
    "Hello, and thank you for joining this interview. I'll ask about your "
    "work and your experiences; there are no right or wrong answers. "
    + PII_NOTICE
)

FAREWELL = (
    "That covers everything I wanted to ask. Thank you so much for your time "
    "and for sharing your experiences."
)

# Consecutive probes allowed on one subtopic before a forced transition.
PROBE_BUDGET = 3


class ActionKind(str, Enum):
    PROBE_DEPTH = "probe_depth"
    EXPLORE_EMERGENCE = "explore_emergence"
    TRANSITION = "transition"
    END = "end"


@dataclass
class InterviewerAction:
    kind: ActionKind
    target: Optional[str] = None
    rationale: str = ""

    @property
    def tag(self) -> str:
        return f"{self.kind.value}:{self.target}" if self.target else self.kind.value


class SessionEndedError(RuntimeError):
    pass


def _trailing_probes(transcript: Transcript, subtopic_id: str) -> int:
    count = 0
    for turn in reversed(transcript.turns):
        if turn.action == f"{ActionKind.PROBE_DEPTH.value}:{subtopic_id}":
            count += 1
        else:
            break
    return count


class InterviewerAgent:
    def __init__(self, gateway: Gateway, turn_cap: int = 72, probe_budget: int = PROBE_BUDGET):
        self.gateway = gateway
        self.turn_cap = turn_cap
        self.probe_budget = probe_budget

    # -- action policy

    def select_action(self, agenda: InterviewAgenda, transcript: Transcript) -> InterviewerAction:
        completed = len(transcript.completed_turns())
        if completed >= self.turn_cap:
            return InterviewerAction(ActionKind.END, rationale="turn cap reached")
        unfinished = agenda.unfinished_ids()
        if not unfinished:
            return InterviewerAction(ActionKind.END, rationale="agenda fully covered")

        current = agenda.current_in_progress()
        if current is not None:
            if _trailing_probes(transcript, current) < self.probe_budget:
                return InterviewerAction(
                    ActionKind.PROBE_DEPTH, target=current, rationale="current subtopic uncovered"
                )
            alternative = self._pick_target(agenda, exclude=current)
            if alternative is None:
                return InterviewerAction(
                    ActionKind.PROBE_DEPTH,
                    target=current,
                    rationale="probe budget spent but no other pending subtopic",
                )
            return self._targeted_action(agenda, alternative, "probe budget exhausted")

        target = self._pick_target(agenda)
        if target is None:  # unreachable given unfinished is nonempty
            return InterviewerAction(ActionKind.END, rationale="no target available")
        return self._targeted_action(agenda, target, "next uncovered subtopic")

    def _targeted_action(
        self, agenda: InterviewAgenda, target: str, rationale: str
    ) -> InterviewerAction:
        subtopic = agenda.guide.find_subtopic(target)
        kind = (
            ActionKind.EXPLORE_EMERGENCE
            if subtopic is not None and subtopic.origin == Origin.EMERGENT
            else ActionKind.TRANSITION
        )
        return InterviewerAction(kind, target=target, rationale=rationale)

    def _pick_target(self, agenda: InterviewAgenda, exclude: Optional[str] = None) -> Optional[str]:
        candidates: List[str] = []
        suggestions = agenda.planner_suggestions or {}
        candidates.extend(suggestions.get("targets", []))
        candidates.extend(agenda.unfinished_ids())
        for candidate in candidates:
            if candidate == exclude:
                continue
            if candidate not in agenda.entries:
                continue
            if agenda.entries[candidate].status == Status.COVERED:
                continue
            return candidate
        return None

    # -- question generation

    def generate_question(
        self, action: InterviewerAction, agenda: InterviewAgenda, transcript: Transcript
    ) -> str:
        if action.kind == ActionKind.END:
            raise ValueError("cannot generate a question for the End action")
        subtopic = agenda.guide.find_subtopic(action.target) if action.target else None
        req = request(
            prompts.QUESTION_GENERATION_SYSTEM,
            prompts.question_generation_user(action.kind.value, subtopic, agenda, transcript),
            temperature=0.7,
        )
        for _ in range(2):
            try:
                question = self.gateway.complete(req).strip()
            except GatewayError as exc:
                log.warning("question generation failed: %s", exc)
                continue
            if question and (subtopic is None or question != subtopic.description):
                return question
        return self._fallback_question(subtopic)

    @staticmethod
    def _fallback_question(subtopic: Optional[Subtopic]) -> str:
        if subtopic is None:
            return "Could you tell me a bit more about that?"
        body = subtopic.description.rstrip(".?! ")
        return f"Could you tell me about {body[0].lower()}{body[1:]}?"

    # -- session framing

    def opening(self, first_question: str) -> str:
        return f"{GREETING}\n\nTo begin: {first_question}"

    def closing(self) -> str:
        return FAREWELL
