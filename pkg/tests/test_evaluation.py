import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from interviewkit.evaluation import EvaluationSuite, write_evaluation_csv
from interviewkit.gateway import Gateway, MockBackend, QueueBackend
from interviewkit.mocks import covering_mock_backend, dedup_covered_subtopics
from interviewkit.model import (
    InterviewAgenda,
    Note,
    ProfileSection,
    TopicGuide,
    Transcript,
    UserProfile,
)


def make_guide():
    return TopicGuide.from_dict(
        {"topics": [{"id": "1", "title": "A", "subtopics": ["one", "two"]}]}
    )


def make_profile():
    return UserProfile(
        profile_id="p",
        sections=[
            ProfileSection(subtopic_id="1.1", description="one", facts=["fact a", "fact b"]),
            ProfileSection(subtopic_id="1.2", description="two", facts=["fact c"]),
        ],
    )


def make_state():
    agenda = InterviewAgenda.for_guide(make_guide())
    transcript = Transcript()
    transcript.append_question("What is one? [s:1.1]")
    transcript.complete_turn("fact a and fact b")
    agenda.add_note(Note(text="fact a and fact b", source_turn=1, subtopic_id="1.1"), 1)
    return agenda, transcript


class TestCoverageJudging:
    def test_likert_mapped_to_unit(self):
        suite = EvaluationSuite(Gateway(QueueBackend([json.dumps({"score": 4})])))
        assert suite.judge_subtopic_coverage("facts", "notes") == 0.75

    def test_out_of_range_excluded_not_clamped(self):
        # Schema-invalid score on both tries: the judgement must be dropped
        # entirely and counted, never clamped into range.
        backend = QueueBackend([json.dumps({"score": 7}), json.dumps({"score": 7})])
        suite = EvaluationSuite(Gateway(backend))
        assert suite.judge_subtopic_coverage("facts", "notes") is None
        assert suite.exclusions["coverage"] == 1

    def test_scores_only_for_profiled_subtopics(self):
        agenda, _ = make_state()
        suite = EvaluationSuite(Gateway(covering_mock_backend()))
        profile = UserProfile(
            profile_id="p",
            sections=[ProfileSection(subtopic_id="1.1", description="one", facts=["f"])],
        )
        scores = suite.score_coverage(profile, agenda)
        assert set(scores) == {"1.1"}


class TestDedup:
    def test_empty_gives_empty(self):
        suite = EvaluationSuite(Gateway(covering_mock_backend()))
        assert suite.dedup([]) == []

    def test_merges_known_duplicates(self):
        suite = EvaluationSuite(Gateway(covering_mock_backend()))
        merged = suite.dedup(
            [
                {"subtopic_covered": "Team leadership experience", "rationale": "led a team"},
                {"subtopic_covered": "Leading teams", "rationale": "managed people"},
            ]
        )
        assert len(merged) == 1
        assert merged[0]["subtopic_covered"] == "Leading teams"
        assert "led a team" in merged[0]["rationale"]
        assert "managed people" in merged[0]["rationale"]

    def test_distinct_items_kept(self):
        items = [
            {"subtopic_covered": "Budget planning", "rationale": "a"},
            {"subtopic_covered": "Conflict resolution", "rationale": "b"},
        ]
        assert len(dedup_covered_subtopics(items)) == 2

    @given(
        st.lists(
            st.sampled_from(
                [
                    "Team leadership experience",
                    "Leading teams",
                    "Budget planning",
                    "Planning the budget",
                    "Conflict resolution",
                    "Resolving conflicts between colleagues",
                    "Mentoring juniors",
                ]
            ),
            max_size=8,
        )
    )
    def test_idempotent(self, phrases):
        items = [{"subtopic_covered": p, "rationale": "r"} for p in phrases]
        once = dedup_covered_subtopics(items)
        twice = dedup_covered_subtopics(once)
        assert once == twice


class TestPipelines:
    def test_emergent_pipeline_with_mock(self):
        agenda, _ = make_state()
        suite = EvaluationSuite(Gateway(covering_mock_backend()))
        assert suite.emergent_pipeline(agenda, make_profile()) == []

    def test_emergent_pipeline_dedups_identified(self):
        backend = covering_mock_backend()
        identified = [
            {"emergent_subtopic": "Team leadership experience", "topic": "A", "rationale": "r"},
            {"emergent_subtopic": "Leading teams", "topic": "A", "rationale": "r2"},
        ]
        covered = [
            {"subtopic_covered": "Team leadership experience", "rationale": "r"},
            {"subtopic_covered": "Leading teams", "rationale": "r2"},
        ]
        backend.script.insert(0, ({"task": "eval_emergent_identify"}, json.dumps(identified)))
        backend.script.insert(0, ({"task": "eval_emergent_coverage"}, json.dumps(covered)))
        suite = EvaluationSuite(Gateway(backend))
        agenda, _ = make_state()
        result = suite.emergent_pipeline(agenda, make_profile())
        assert len(result) == 1

    def test_coherence_and_leading(self):
        _, transcript = make_state()
        suite = EvaluationSuite(Gateway(covering_mock_backend()))
        coherence = suite.judge_coherence(transcript)
        assert coherence == {
            "local_coherence": 4,
            "transition_quality": 4,
            "contingent_responsiveness": 4,
        }
        assert suite.judge_leading(transcript) == [3]

    def test_leading_out_of_range_excluded(self):
        backend = QueueBackend([json.dumps({"score": 9}), json.dumps({"score": 9})])
        suite = EvaluationSuite(Gateway(backend))
        _, transcript = make_state()
        assert suite.judge_leading(transcript) == []
        assert suite.exclusions["leading"] == 1


class TestEvaluateSession:
    def test_full_evaluation(self):
        agenda, transcript = make_state()
        suite = EvaluationSuite(Gateway(covering_mock_backend()))
        result = suite.evaluate_session(agenda, transcript, make_profile())
        assert result.num_turns == 1
        assert result.coverage_scores == {"1.1": 1.0, "1.2": 1.0}
        assert result.coverage_mean == 1.0
        assert result.emergent_covered == []
        assert result.utility_breakdown is not None
        # alpha = 1/2 per subtopic, full coverage, 1 turn within the grace
        # period of 1 topic, no emergence.
        assert result.utility_breakdown.total == pytest.approx(1.0)

    def test_csv_writer(self, tmp_path):
        agenda, transcript = make_state()
        suite = EvaluationSuite(Gateway(covering_mock_backend()))
        result = suite.evaluate_session(agenda, transcript, make_profile())
        path = tmp_path / "summary.csv"
        write_evaluation_csv({"run1": result}, str(path))
        lines = path.read_text().strip().splitlines()
        assert lines[0].startswith("session,")
        assert lines[1].startswith("run1,")
