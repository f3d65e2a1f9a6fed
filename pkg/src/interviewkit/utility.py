"""Pure computation of the interview objective.

Coverage is a sum of per-subtopic scores in [0, 1]; cost is piecewise-linear
in the turn count with a grace period; emergence is a sum over discovered
emergent subtopics. Utility combines the three with nonnegative weights:

    total = alpha * coverage - beta * cost + gamma * emergence
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

from .model import TopicGuide, UtilityWeights


class OutOfRangeError(ValueError):
    pass


@dataclass
class CoverageVector:
    """Per-subtopic coverage scores, partitioned by origin."""

    predefined: Dict[str, float]
    emergent: Dict[str, float]

    def __post_init__(self) -> None:
        for scores in (self.predefined, self.emergent):
            for sid, score in scores.items():
                if not 0.0 <= score <= 1.0:
                    raise OutOfRangeError(f"coverage score for {sid} outside [0,1]: {score}")


@dataclass(frozen=True)
class UtilityBreakdown:
    coverage_term: float
    cost_term: float
    emergence_term: float
    total: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "coverage_term": self.coverage_term,
            "cost_term": self.cost_term,
            "emergence_term": self.emergence_term,
            "total": self.total,
        }


def likert_to_unit(score: int) -> float:
    """Map a 1..5 judge score linearly onto [0, 1]."""
    if score not in (1, 2, 3, 4, 5):
        raise OutOfRangeError(f"likert score must be in 1..5, got {score!r}")
    return (score - 1) / 4.0


def predefined_coverage(scores: Dict[str, float], guide: TopicGuide) -> Tuple[float, float]:
    """(sum, mean) of coverage over the guide's predefined subtopics.

    Missing subtopics count as 0 (un-discussed means uncovered).
    """
    predefined = guide.predefined_subtopics()
    if not predefined:
        raise ValueError("guide has no predefined subtopics")
    total = sum(scores.get(s.id, 0.0) for s in predefined)
    return total, total / len(predefined)


def emergent_coverage(scores: Dict[str, float]) -> float:
    return sum(scores.values())


def interview_cost(num_turns: int, free_turns: int, per_turn_cost: float) -> float:
    return max(0, num_turns - free_turns) * per_turn_cost


def utility(
    coverage_sum: float, cost: float, emergence_sum: float, weights: UtilityWeights
) -> UtilityBreakdown:
    coverage_term = weights.alpha * coverage_sum
    cost_term = weights.beta * cost
    emergence_term = weights.gamma * emergence_sum
    return UtilityBreakdown(
        coverage_term=coverage_term,
        cost_term=cost_term,
        emergence_term=emergence_term,
        total=coverage_term - cost_term + emergence_term,
    )


def expected_utility_gain(
    delta_c: float, delta_l: float, delta_e: float, weights: UtilityWeights
) -> float:
    return weights.alpha * delta_c - weights.beta * delta_l + weights.gamma * delta_e
