"""Session lifecycle: the turn loop, event logging, and resume.

The orchestrator owns the canonical (agenda, transcript) pair and is the only
writer of the event log. Each completed turn runs, in order: record the
response, agenda maintenance, planning (every ``planner_period`` turns),
utility bookkeeping, action selection, and either the next question or the
session end. Resume reconstructs state by replaying the event log.
"""

from __future__ import annotations

import csv
import logging
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, List, Optional

from . import events as ev
from .agenda import AgendaManager
from .gateway import Gateway
from .interviewer import ActionKind, InterviewerAction, InterviewerAgent, SessionEndedError
from .model import (
    InterviewAgenda,
    TopicGuide,
    Transcript,
    UtilityWeights,
    evaluation_weights,
    validate_guide,
)
from .planner import ExplorationPlanner, StalePlanError
from .utility import interview_cost, utility

log = logging.getLogger(__name__)

UTILITY_SERIES_COLUMNS = ("turn", "C_sum", "L", "E_sum", "U")


class Phase(str, Enum):
    CREATED = "created"
    ACTIVE = "active"
    ENDED = "ended"


@dataclass
class PlannerConfig:
    period: int = 2  # run the planner every this many completed turns
    num_rollouts: int = 3
    horizon: int = 3
    enabled: bool = True


@dataclass
class SessionConfig:
    turn_cap: int = 72
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    seed: Optional[int] = None
    log_path: Optional[str] = None
    session_id: Optional[str] = None


def should_trigger_planner(completed_turns: int, period: int) -> bool:
    return completed_turns > 0 and completed_turns % period == 0


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class SessionOrchestrator:
    def __init__(
        self,
        guide: TopicGuide,
        gateway: Gateway,
        config: Optional[SessionConfig] = None,
    ):
        self.guide = validate_guide(guide)
        self.config = config or SessionConfig()
        self.session_id = self.config.session_id or uuid.uuid4().hex[:12]
        self.gateway = gateway
        self.agenda = InterviewAgenda.for_guide(self.guide)
        self.transcript = Transcript()
        self.log = ev.EventLog(self.config.log_path)
        self.phase = Phase.CREATED
        self.manager = AgendaManager(gateway)
        self.interviewer = InterviewerAgent(gateway, turn_cap=self.config.turn_cap)
        self.planner = ExplorationPlanner(
            gateway,
            num_rollouts=self.config.planner.num_rollouts,
            horizon=self.config.planner.horizon,
            k=self.config.planner.period,
            seed=self.config.seed,
        )
        self.eval_weights: UtilityWeights = evaluation_weights(
            num_subtopics=len(self.guide.predefined_subtopics()),
            num_topics=len(self.guide.topics),
        )
        self.utility_series: List[Dict[str, float]] = []
        self.end_reason: Optional[str] = None

    # -- lifecycle

    def start(self) -> str:
        """Open the session and return the interviewer's first message."""
        if self.phase != Phase.CREATED:
            raise RuntimeError(f"cannot start a session in phase {self.phase.value}")
        action = self.interviewer.select_action(self.agenda, self.transcript)
        if action.kind == ActionKind.END:
            # Degenerate guide (nothing to ask): open and close immediately.
            self.phase = Phase.ENDED
            self._record_end("empty agenda")
            return self.interviewer.closing()
        self._apply_target(action)
        question = self.interviewer.generate_question(action, self.agenda, self.transcript)
        message = self.interviewer.opening(question)
        turn = self.transcript.append_question(message, action=action.tag, asked_at=_now())
        self._record_turn(turn)
        self.phase = Phase.ACTIVE
        return message

    def submit_response(self, response: str) -> Dict[str, Any]:
        """Record one interviewee response and advance the session one turn.

        Returns {"message": next interviewer message, "ended": bool,
        "turn": completed turn index}.
        """
        if self.phase == Phase.ENDED:
            raise SessionEndedError(f"session {self.session_id} has ended")
        if self.phase != Phase.ACTIVE:
            raise RuntimeError("session not started")
        if not response.strip():
            # A blank response still consumes the turn; the agenda pass will
            # extract nothing and the interviewer moves on.
            log.info("blank response on turn %d", len(self.transcript.turns))
        turn = self.transcript.complete_turn(response, answered_at=_now())
        self._record_turn(turn)

        for event in self.manager.step(self.agenda, self.transcript, response):
            self.log.append(event)

        completed = len(self.transcript.completed_turns())
        if self.config.planner.enabled and should_trigger_planner(
            completed, self.config.planner.period
        ):
            self._run_planner(completed)

        self._record_utility_point(completed)

        action = self.interviewer.select_action(self.agenda, self.transcript)
        if action.kind == ActionKind.END:
            self.phase = Phase.ENDED
            self.end_reason = action.rationale
            self._record_end(action.rationale)
            return {"message": self.interviewer.closing(), "ended": True, "turn": completed}

        self._apply_target(action)
        question = self.interviewer.generate_question(action, self.agenda, self.transcript)
        next_turn = self.transcript.append_question(question, action=action.tag, asked_at=_now())
        self._record_turn(next_turn)
        return {"message": question, "ended": False, "turn": completed}

    # -- internals

    def _apply_target(self, action: InterviewerAction) -> None:
        if action.target is None:
            return
        current = self.agenda.current_in_progress()
        if current == action.target:
            return
        self.agenda.set_in_progress(action.target)
        if current is not None:
            self.log.append(
                {"kind": ev.STATUS_CHANGE, "subtopic_id": current, "status": "pending"}
            )
        self.log.append(
            {"kind": ev.STATUS_CHANGE, "subtopic_id": action.target, "status": "in_progress"}
        )

    def _run_planner(self, completed: int) -> None:
        result = self.planner.plan(self.agenda, self.transcript)
        try:
            suggestions, added = self.planner.apply_plan(self.agenda, result, completed)
        except StalePlanError as exc:
            log.warning("discarding stale plan: %s", exc)
            return
        if suggestions is None and added is None:
            return
        event: Dict[str, Any] = {"kind": ev.PLANNER_RESULT, "suggestions": suggestions}
        if added is not None:
            event["emergent"] = {
                "id": added.id,
                "description": added.description,
                "parent_topic_id": added.parent_topic_id,
                "created_turn": added.created_turn,
            }
        self.log.append(event)

    def _record_turn(self, turn) -> None:
        self.log.append(
            {
                "kind": ev.TURN,
                "index": turn.index,
                "question": turn.question,
                "response": turn.response,
                "asked_at": turn.asked_at,
                "answered_at": turn.answered_at,
                "action": turn.action,
            }
        )

    def _record_utility_point(self, completed: int) -> None:
        c_sum = self.agenda.coverage_sum()
        e_sum = self.agenda.emergence_sum()
        cost = interview_cost(
            completed, self.eval_weights.free_turns, self.eval_weights.per_turn_cost
        )
        breakdown = utility(c_sum, cost, e_sum, self.eval_weights)
        self.utility_series.append(
            {"turn": completed, "C_sum": c_sum, "L": cost, "E_sum": e_sum, "U": breakdown.total}
        )

    def _record_end(self, reason: str) -> None:
        self.log.append({"kind": ev.SESSION_END, "reason": reason, "ended_at": _now()})

    # -- outputs

    def write_utility_series(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=UTILITY_SERIES_COLUMNS)
            writer.writeheader()
            writer.writerows(self.utility_series)

    def final_utility(self) -> Optional[float]:
        return self.utility_series[-1]["U"] if self.utility_series else None

    # -- resume

    @classmethod
    def resume(
        cls, guide: TopicGuide, gateway: Gateway, config: SessionConfig
    ) -> "SessionOrchestrator":
        """Reconstruct a session from its event log and continue it."""
        if not config.log_path:
            raise ValueError("resume requires a log_path")
        session = cls(guide, gateway, config)
        agenda, transcript, ended = ev.replay(guide, session.log.events)
        session.agenda = agenda
        session.transcript = transcript
        if ended:
            session.phase = Phase.ENDED
        elif transcript.turns:
            session.phase = Phase.ACTIVE
        # Rebuild the utility series from the replayed turn history so the
        # resumed session appends consistent rows.
        completed = len(transcript.completed_turns())
        for t in range(1, completed + 1):
            session._record_utility_point_at(t)
        return session

    def _record_utility_point_at(self, turn: int) -> None:
        # Coverage history is not stored per turn; resumed sessions carry the
        # final sums for past rows, which is enough for continued appends.
        c_sum = self.agenda.coverage_sum()
        e_sum = self.agenda.emergence_sum()
        cost = interview_cost(turn, self.eval_weights.free_turns, self.eval_weights.per_turn_cost)
        breakdown = utility(c_sum, cost, e_sum, self.eval_weights)
        self.utility_series.append(
            {"turn": turn, "C_sum": c_sum, "L": cost, "E_sum": e_sum, "U": breakdown.total}
        )
