import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from interviewkit.model import TopicGuide, UtilityWeights, evaluation_weights
from interviewkit.utility import (
    CoverageVector,
    OutOfRangeError,
    emergent_coverage,
    expected_utility_gain,
    interview_cost,
    likert_to_unit,
    predefined_coverage,
    utility,
)


def guide_of(n: int) -> TopicGuide:
    return TopicGuide.from_dict(
        {"topics": [{"id": "1", "title": "t", "subtopics": [f"s{i}" for i in range(n)]}]}
    )


class TestLikert:
    def test_endpoints(self):
        assert likert_to_unit(1) == 0.0
        assert likert_to_unit(5) == 1.0
        assert likert_to_unit(3) == 0.5

    @pytest.mark.parametrize("bad", [0, 6, -1, 2.5, "3"])
    def test_out_of_range_raises(self, bad):
        with pytest.raises(OutOfRangeError):
            likert_to_unit(bad)


class TestCoverage:
    def test_missing_subtopics_count_zero(self):
        total, mean = predefined_coverage({"1.1": 1.0}, guide_of(4))
        assert total == 1.0
        assert mean == 0.25

    def test_coverage_vector_rejects_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            CoverageVector(predefined={"1.1": 1.5}, emergent={})
        with pytest.raises(OutOfRangeError):
            CoverageVector(predefined={}, emergent={"1.E1": -0.1})

    def test_emergent_coverage_sums(self):
        assert emergent_coverage({"a": 0.5, "b": 1.0}) == 1.5


class TestCost:
    def test_grace_period(self):
        assert interview_cost(10, 10, 1.0) == 0.0
        assert interview_cost(11, 10, 1.0) == 1.0
        assert interview_cost(0, 0, 1.0) == 0.0

    @given(st.integers(0, 200), st.integers(0, 50))
    def test_cost_nonnegative_and_monotone(self, n, free):
        cost = interview_cost(n, free, 1.0)
        assert cost >= 0
        assert interview_cost(n + 1, free, 1.0) >= cost


class TestUtility:
    def test_breakdown_terms(self):
        w = UtilityWeights(alpha=2.0, beta=0.5, gamma=3.0)
        b = utility(4.0, 6.0, 1.0, w)
        assert b.coverage_term == 8.0
        assert b.cost_term == 3.0
        assert b.emergence_term == 3.0
        assert b.total == 8.0

    def test_evaluation_weighting_example(self):
        w = evaluation_weights(num_subtopics=48, num_topics=10)
        b = utility(48.0, interview_cost(48, w.free_turns, w.per_turn_cost), 0.0, w)
        assert b.total == pytest.approx(1.0 - 38 / 72, abs=1e-12)

    @given(
        st.floats(0, 10, allow_nan=False),
        st.floats(0, 10, allow_nan=False),
        st.floats(0, 10, allow_nan=False),
        st.floats(0, 100, allow_nan=False),
        st.floats(0, 100, allow_nan=False),
        st.floats(0, 20, allow_nan=False),
    )
    def test_linearity_property(self, a, b, g, c, l, e):
        w = UtilityWeights(alpha=a, beta=b, gamma=g)
        total = utility(c, l, e, w).total
        oracle = math.fsum([a * c, -(b * l), g * e])
        assert total == pytest.approx(oracle, abs=1e-9)

    def test_gain_matches_absolute_difference(self):
        w = UtilityWeights(alpha=1.0, beta=1.0, gamma=1.0)
        before = utility(3.0, 5.0, 1.0, w).total
        after = utility(4.0, 8.0, 2.0, w).total
        assert expected_utility_gain(1.0, 3.0, 1.0, w) == pytest.approx(after - before)
