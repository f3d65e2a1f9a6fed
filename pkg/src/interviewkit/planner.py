"""Rollout-based deliberative planning.

Every k turns the planner simulates candidate conversation continuations,
scores each by expected utility gain (coverage gain minus horizon cost plus
judged emergence), selects the best plan, and may add at most one emergent
subtopic to the agenda. The planner never mutates shared state itself: it
returns values the orchestrator applies at a turn boundary.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from . import prompts
from .gateway import Gateway, GatewayError, request
from .model import InterviewAgenda, Note, Transcript, UtilityWeights, planner_weights
from .utility import expected_utility_gain

log = logging.getLogger(__name__)

UNUSABLE_SCORE = float("-inf")

ROLLOUT_TEMPERATURE = 0.9


@dataclass
class RolloutPlan:
    base_turn: int
    questions: List[str] = field(default_factory=list)
    simulated_responses: List[str] = field(default_factory=list)
    target_subtopics: List[str] = field(default_factory=list)
    delta_c: float = 0.0
    delta_l: float = 0.0
    delta_e: float = 0.0
    score: Optional[float] = None

    def __post_init__(self) -> None:
        if len(self.questions) != len(self.simulated_responses):
            raise ValueError("questions and simulated responses must be parallel")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base_turn": self.base_turn,
            "questions": list(self.questions),
            "simulated_responses": list(self.simulated_responses),
            "target_subtopics": list(self.target_subtopics),
            "delta": {"c": self.delta_c, "l": self.delta_l, "e": self.delta_e},
            "score": None if self.score is None or math.isinf(self.score) else self.score,
            "usable": self.score is not None and not math.isinf(self.score),
        }


@dataclass
class PrioritizedPlan:
    plan: RolloutPlan
    targets: List[str]
    freshness: int  # base turn the plan was computed from

    def to_dict(self) -> Dict[str, Any]:
        return {"targets": list(self.targets), "base_turn": self.freshness, "score": self.plan.score}


@dataclass
class EmergentProposal:
    description: str
    parent_topic_id: str
    rationale: str


@dataclass
class PlannerResult:
    rollouts: List[RolloutPlan]
    selected: Optional[PrioritizedPlan]
    proposal: Optional[EmergentProposal]


class StalePlanError(RuntimeError):
    pass


class ExplorationPlanner:
    def __init__(
        self,
        gateway: Gateway,
        num_rollouts: int = 3,
        horizon: int = 3,
        k: int = 2,
        weights: Optional[UtilityWeights] = None,
        seed: Optional[int] = None,
    ):
        if num_rollouts < 1 or horizon < 1 or k < 1:
            raise ValueError("num_rollouts, horizon, and k must all be >= 1")
        self.gateway = gateway
        self.num_rollouts = num_rollouts
        self.horizon = horizon
        self.k = k
        self.weights = weights or planner_weights()
        self.seed = seed

    # -- rollout generation

    def generate_rollouts(
        self, agenda: InterviewAgenda, transcript: Transcript
    ) -> List[RolloutPlan]:
        base_turn = len(transcript.completed_turns())
        targets = agenda.unfinished_ids()[: self.horizon]
        plans: List[RolloutPlan] = []
        for r in range(self.num_rollouts):
            seed = None if self.seed is None else self.seed + base_turn * 100 + r
            questions: List[str] = []
            responses: List[str] = []
            try:
                for step in range(self.horizon):
                    context = self._rollout_context(agenda, transcript, questions, responses, r)
                    question = self.gateway.complete(
                        request(
                            prompts.ROLLOUT_QUESTION_SYSTEM,
                            context,
                            temperature=ROLLOUT_TEMPERATURE,
                            seed=None if seed is None else seed * 10 + step,
                        )
                    ).strip()
                    response = self.gateway.complete(
                        request(
                            prompts.ROLLOUT_RESPONSE_SYSTEM,
                            context + f"\nHYPOTHETICAL_QUESTION: {question}",
                            temperature=ROLLOUT_TEMPERATURE,
                            seed=None if seed is None else seed * 10 + step,
                        )
                    ).strip()
                    questions.append(question)
                    responses.append(response)
            except GatewayError as exc:
                log.warning("rollout generation unavailable: %s", exc)
                return []
            plans.append(
                RolloutPlan(
                    base_turn=base_turn,
                    questions=questions,
                    simulated_responses=responses,
                    target_subtopics=list(targets),
                )
            )
        return plans

    @staticmethod
    def _rollout_context(
        agenda: InterviewAgenda,
        transcript: Transcript,
        sim_questions: List[str],
        sim_responses: List[str],
        rollout_index: int,
    ) -> str:
        simulated = "\n".join(
            f"[simulated] Interviewer: {q}\n[simulated] UserAgent: {a}"
            for q, a in zip(sim_questions, sim_responses)
        )
        return (
            f"ROLLOUT_INDEX: {rollout_index}\n\n"
            f"AGENDA:\n{prompts.render_agenda_context(agenda)}\n\n"
            f"TRANSCRIPT:\n{prompts.render_transcript(transcript, window=8)}\n\n"
            f"SIMULATED_SO_FAR:\n{simulated or '(none)'}\n"
        )

    # -- scoring

    def score_rollout(self, plan: RolloutPlan, agenda: InterviewAgenda) -> RolloutPlan:
        try:
            simulated_notes = [
                Note(text=resp, source_turn=plan.base_turn or 1)
                for resp in plan.simulated_responses
                if resp.strip()
            ]
            newly_covered = 0
            for target in plan.target_subtopics:
                subtopic = agenda.guide.find_subtopic(target)
                if subtopic is None:
                    continue
                data = self.gateway.complete_json(
                    request(
                        prompts.COVERAGE_ASSESSMENT_SYSTEM,
                        prompts.coverage_assessment_user(
                            subtopic, [n.text for n in simulated_notes]
                        ),
                        temperature=0.0,
                        response_schema=prompts.COVERAGE_ASSESSMENT_SCHEMA,
                    )
                )
                if data["covered"]:
                    newly_covered += 1
            emergence = self.gateway.complete_json(
                request(
                    prompts.ROLLOUT_EMERGENCE_SYSTEM,
                    "SIMULATED_RESPONSES:\n"
                    + "\n".join(f"- {r}" for r in plan.simulated_responses)
                    + f"\n\nAGENDA:\n{prompts.render_guide_outline(agenda)}\n",
                    temperature=0.0,
                    response_schema=prompts.ROLLOUT_EMERGENCE_SCHEMA,
                )
            )["emergence"]
        except GatewayError as exc:
            log.warning("rollout scoring unavailable: %s", exc)
            plan.score = UNUSABLE_SCORE
            return plan
        plan.delta_c = float(newly_covered)
        plan.delta_l = len(plan.questions) * self.weights.per_turn_cost
        plan.delta_e = float(emergence)
        plan.score = expected_utility_gain(plan.delta_c, plan.delta_l, plan.delta_e, self.weights)
        return plan

    # -- selection and application

    @staticmethod
    def select_plan(plans: List[RolloutPlan]) -> Optional[PrioritizedPlan]:
        usable = [p for p in plans if p.score is not None and not math.isinf(p.score)]
        if not usable:
            return None
        best = max(usable, key=lambda p: p.score)  # max() keeps the first on ties
        return PrioritizedPlan(plan=best, targets=list(best.target_subtopics), freshness=best.base_turn)

    def brainstorm_emergent_subtopic(
        self, agenda: InterviewAgenda, transcript: Transcript
    ) -> Optional[EmergentProposal]:
        if not transcript.completed_turns():
            raise ValueError("brainstorming requires at least one complete turn")
        try:
            data = self.gateway.complete_json(
                request(
                    prompts.EMERGENT_BRAINSTORM_SYSTEM,
                    f"AGENDA:\n{prompts.render_guide_outline(agenda)}\n\n"
                    f"TRANSCRIPT:\n{prompts.render_transcript(transcript, window=10)}\n",
                    temperature=0.2,
                    response_schema=prompts.EMERGENT_BRAINSTORM_SCHEMA,
                )
            )
        except GatewayError as exc:
            log.warning("emergent brainstorm unavailable: %s", exc)
            return None
        candidate = data.get("candidate")
        if not candidate:
            return None
        description = candidate["description"].strip()
        parent = candidate["parent_topic_id"]
        if agenda.guide.find_topic(parent) is None:
            log.warning("brainstorm proposed unknown parent topic %s, dropping", parent)
            return None
        word_count = len(description.split())
        if not 2 <= word_count <= 12:
            log.warning("brainstorm description length out of bounds, dropping: %r", description)
            return None
        existing = {s.description.strip().lower() for s in agenda.guide.subtopics()}
        if description.lower() in existing:
            return None
        return EmergentProposal(
            description=description, parent_topic_id=parent, rationale=candidate["rationale"]
        )

    def plan(self, agenda: InterviewAgenda, transcript: Transcript) -> PlannerResult:
        rollouts = self.generate_rollouts(agenda, transcript)
        for plan in rollouts:
            self.score_rollout(plan, agenda)
        selected = self.select_plan(rollouts)
        proposal = None
        if transcript.completed_turns():
            proposal = self.brainstorm_emergent_subtopic(agenda, transcript)
        return PlannerResult(rollouts=rollouts, selected=selected, proposal=proposal)

    def apply_plan(
        self,
        agenda: InterviewAgenda,
        result: PlannerResult,
        current_turn: int,
    ) -> Tuple[Optional[Dict[str, Any]], Optional[Any]]:
        """Apply a planner result at a turn boundary.

        Returns (suggestions dict as stored on the agenda, emergent subtopic
        added or None). Raises StalePlanError when the plan's base turn lags
        the current turn by more than the planning period.
        """
        if result.selected is not None and current_turn - result.selected.freshness > self.k:
            raise StalePlanError(
                f"plan from turn {result.selected.freshness} is stale at turn {current_turn}"
            )
        added = None
        if result.proposal is not None:
            added = agenda.add_emergent(
                result.proposal.description,
                result.proposal.parent_topic_id,
                created_turn=current_turn,
            )
        suggestions = None
        if result.selected is not None:
            targets = list(result.selected.targets)
            if added is not None:
                targets.insert(0, added.id)
            suggestions = {
                "targets": targets,
                "base_turn": result.selected.freshness,
                "score": result.selected.plan.score,
            }
            agenda.planner_suggestions = suggestions
        elif added is not None:
            suggestions = {"targets": [added.id], "base_turn": current_turn, "score": None}
            agenda.planner_suggestions = suggestions
        return suggestions, added
