"""Post-hoc evaluation of completed interview sessions.

Judged metrics (coverage recall per subtopic, emergent-subtopic discovery,
conversational coherence, leading-question cleanliness) plus computed metrics
(readability, utility). Judge outputs that fail validation or fall outside
their scale are EXCLUDED from aggregates - never clamped - and every
exclusion is counted per metric.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from . import prompts
from .gateway import Gateway, GatewayError, request
from .model import InterviewAgenda, TopicGuide, Transcript, UserProfile, evaluation_weights
from .readability import analyze
from .utility import (
    OutOfRangeError,
    UtilityBreakdown,
    interview_cost,
    likert_to_unit,
    predefined_coverage,
    utility,
)

log = logging.getLogger(__name__)


def _mean(values: List[float]) -> Optional[float]:
    return sum(values) / len(values) if values else None


@dataclass
class SessionEvaluation:
    coverage_scores: Dict[str, float] = field(default_factory=dict)  # unit scores in [0,1]
    coverage_mean: Optional[float] = None
    emergent_covered: List[Dict[str, str]] = field(default_factory=list)
    coherence: Optional[Dict[str, int]] = None
    leading_scores: List[int] = field(default_factory=list)
    leading_mean: Optional[float] = None
    readability_grade: Optional[float] = None
    readability_ease: Optional[float] = None
    utility_breakdown: Optional[UtilityBreakdown] = None
    num_turns: int = 0
    exclusions: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "coverage_scores": dict(sorted(self.coverage_scores.items())),
            "coverage_mean": self.coverage_mean,
            "emergent_covered": list(self.emergent_covered),
            "coherence": self.coherence,
            "leading_scores": list(self.leading_scores),
            "leading_mean": self.leading_mean,
            "readability_grade": self.readability_grade,
            "readability_ease": self.readability_ease,
            "utility": self.utility_breakdown.to_dict() if self.utility_breakdown else None,
            "num_turns": self.num_turns,
            "exclusions": dict(sorted(self.exclusions.items())),
        }


class EvaluationSuite:
    def __init__(self, gateway: Gateway):
        self.gateway = gateway
        self.exclusions: Dict[str, int] = {}

    def _exclude(self, metric: str, reason: str) -> None:
        self.exclusions[metric] = self.exclusions.get(metric, 0) + 1
        log.warning("excluding one %s judgement: %s", metric, reason)

    # -- coverage recall

    def judge_subtopic_coverage(self, ground_truth: str, notes: str) -> Optional[float]:
        """Unit-interval recall score for one subtopic, or None if excluded."""
        try:
            data = self.gateway.complete_json(
                request(
                    prompts.EVAL_COVERAGE_SYSTEM,
                    prompts.eval_coverage_user(ground_truth, notes),
                    temperature=0.0,
                    response_schema=prompts.EVAL_COVERAGE_SCHEMA,
                )
            )
        except GatewayError as exc:
            self._exclude("coverage", str(exc))
            return None
        try:
            return likert_to_unit(data["score"])
        except OutOfRangeError as exc:
            self._exclude("coverage", str(exc))
            return None

    def score_coverage(
        self, profile: UserProfile, agenda: InterviewAgenda
    ) -> Dict[str, float]:
        notes = self._render_notes(agenda)
        scores: Dict[str, float] = {}
        for subtopic in agenda.guide.predefined_subtopics():
            section = profile.section_for(subtopic.id)
            if section is None or not section.facts:
                continue
            ground_truth = "\n".join(f"- {fact}" for fact in section.facts)
            unit = self.judge_subtopic_coverage(ground_truth, notes)
            if unit is not None:
                scores[subtopic.id] = unit
        return scores

    @staticmethod
    def _render_notes(agenda: InterviewAgenda) -> str:
        notes = agenda.all_notes()
        return "\n".join(f"- {n.text}" for n in notes) if notes else "(no notes)"

    # -- emergent discovery pipeline

    def identify_emergent(
        self, agenda: InterviewAgenda, profile: UserProfile
    ) -> List[Dict[str, str]]:
        ground_truth = prompts.render_profile(profile)
        try:
            return self.gateway.complete_json(
                request(
                    prompts.EVAL_EMERGENT_IDENTIFY_SYSTEM,
                    prompts.eval_emergent_identify_user(
                        prompts.render_guide_outline(agenda, with_status=False),
                        ground_truth,
                        self._render_notes(agenda),
                    ),
                    temperature=0.0,
                    response_schema=prompts.EVAL_EMERGENT_IDENTIFY_SCHEMA,
                )
            )
        except GatewayError as exc:
            self._exclude("emergent_identify", str(exc))
            return []

    def judge_emergent_coverage(
        self, subtopics: List[str], agenda: InterviewAgenda
    ) -> List[Dict[str, str]]:
        if not subtopics:
            return []
        try:
            return self.gateway.complete_json(
                request(
                    prompts.EVAL_EMERGENT_COVERAGE_SYSTEM,
                    prompts.eval_emergent_coverage_user(subtopics, self._render_notes(agenda)),
                    temperature=0.0,
                    response_schema=prompts.EVAL_COVERED_LIST_SCHEMA,
                )
            )
        except GatewayError as exc:
            self._exclude("emergent_coverage", str(exc))
            return []

    def dedup(self, items: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
        if not items:
            return []
        try:
            return self.gateway.complete_json(
                request(
                    prompts.EVAL_DEDUP_SYSTEM,
                    prompts.eval_dedup_user(items),
                    temperature=0.0,
                    response_schema=prompts.EVAL_COVERED_LIST_SCHEMA,
                )
            )
        except GatewayError as exc:
            self._exclude("dedup", str(exc))
            return items

    def emergent_pipeline(
        self, agenda: InterviewAgenda, profile: UserProfile
    ) -> List[Dict[str, str]]:
        """identify -> coverage -> dedup; result is the covered emergent set."""
        identified = self.identify_emergent(agenda, profile)
        covered = self.judge_emergent_coverage(
            [item["emergent_subtopic"] for item in identified], agenda
        )
        return self.dedup(covered)

    # -- conversation quality

    def judge_coherence(self, transcript: Transcript) -> Optional[Dict[str, int]]:
        try:
            data = self.gateway.complete_json(
                request(
                    prompts.EVAL_COHERENCE_SYSTEM,
                    f"TRANSCRIPT:\n{prompts.render_transcript(transcript)}\n",
                    temperature=0.0,
                    response_schema=prompts.EVAL_COHERENCE_SCHEMA,
                )
            )
        except GatewayError as exc:
            self._exclude("coherence", str(exc))
            return None
        dims = ("local_coherence", "transition_quality", "contingent_responsiveness")
        for dim in dims:
            if data[dim] not in (1, 2, 3, 4, 5):
                self._exclude("coherence", f"{dim} outside 1..5: {data[dim]!r}")
                return None
        return {dim: data[dim] for dim in dims}

    def judge_leading(self, transcript: Transcript) -> List[int]:
        scores: List[int] = []
        for turn in transcript.turns:
            try:
                data = self.gateway.complete_json(
                    request(
                        prompts.EVAL_LEADING_SYSTEM,
                        prompts.eval_leading_user(transcript, turn.question),
                        temperature=0.0,
                        response_schema=prompts.EVAL_LEADING_SCHEMA,
                    )
                )
            except GatewayError as exc:
                self._exclude("leading", str(exc))
                continue
            if data["score"] not in (1, 2, 3):
                self._exclude("leading", f"score outside 1..3: {data['score']!r}")
                continue
            scores.append(data["score"])
        return scores

    @staticmethod
    def readability_of_questions(transcript: Transcript) -> Dict[str, Optional[float]]:
        grades: List[float] = []
        eases: List[float] = []
        for turn in transcript.turns:
            try:
                stats = analyze(turn.question)
            except ValueError:
                continue
            grades.append(stats.grade)
            eases.append(stats.ease)
        return {"grade": _mean(grades), "ease": _mean(eases)}

    # -- end-to-end

    def evaluate_session(
        self,
        agenda: InterviewAgenda,
        transcript: Transcript,
        profile: UserProfile,
        guide: Optional[TopicGuide] = None,
    ) -> SessionEvaluation:
        guide = guide or agenda.guide
        self.exclusions = {}
        result = SessionEvaluation(num_turns=len(transcript.completed_turns()))

        result.coverage_scores = self.score_coverage(profile, agenda)
        c_sum, c_mean = predefined_coverage(result.coverage_scores, guide)
        result.coverage_mean = c_mean

        result.emergent_covered = self.emergent_pipeline(agenda, profile)
        e_sum = float(len(result.emergent_covered))

        result.coherence = self.judge_coherence(transcript)
        result.leading_scores = self.judge_leading(transcript)
        result.leading_mean = _mean([float(s) for s in result.leading_scores])

        readability = self.readability_of_questions(transcript)
        result.readability_grade = readability["grade"]
        result.readability_ease = readability["ease"]

        weights = evaluation_weights(
            num_subtopics=len(guide.predefined_subtopics()), num_topics=len(guide.topics)
        )
        cost = interview_cost(result.num_turns, weights.free_turns, weights.per_turn_cost)
        result.utility_breakdown = utility(c_sum, cost, e_sum, weights)
        result.exclusions = dict(self.exclusions)
        return result


def write_evaluation_csv(evaluations: Dict[str, SessionEvaluation], path: str) -> None:
    """One row per session: headline metrics for cross-run comparison."""
    columns = (
        "session",
        "num_turns",
        "coverage_mean",
        "emergent_count",
        "leading_mean",
        "readability_grade",
        "utility",
    )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for name, ev in sorted(evaluations.items()):
            writer.writerow(
                [
                    name,
                    ev.num_turns,
                    ev.coverage_mean,
                    len(ev.emergent_covered),
                    ev.leading_mean,
                    ev.readability_grade,
                    ev.utility_breakdown.total if ev.utility_breakdown else None,
                ]
            )
