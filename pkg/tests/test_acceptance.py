"""Acceptance gate: one test per release criterion.

Every test prints a single ``ACCEPTANCE <name>: PASS|FAIL`` line (run with
``pytest -s`` to see them) in addition to its assertions.
"""

import contextlib
import json
import math
import os
import random

import pytest

from interviewkit import events as ev
from interviewkit.evaluation import EvaluationSuite
from interviewkit.gateway import ENV_API_BASE, ENV_API_KEY, Gateway, MockBackend, QueueBackend
from interviewkit.mocks import covering_mock_backend, dedup_covered_subtopics, parse_field
from interviewkit.model import (
    TopicGuide,
    UtilityWeights,
    canonical_json,
    evaluation_weights,
    load_guide,
)
from interviewkit.orchestrator import (
    Phase,
    PlannerConfig,
    SessionConfig,
    SessionOrchestrator,
    should_trigger_planner,
)
from interviewkit.planner import ExplorationPlanner, RolloutPlan
from interviewkit.readability import grade_level, reading_ease
from interviewkit.simulator import ScriptedProfileResponder
from interviewkit.utility import interview_cost, utility


@contextlib.contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


def run_to_end(session, responder, max_rounds=200):
    message = session.start()
    for _ in range(max_rounds):
        if session.phase == Phase.ENDED:
            break
        result = session.submit_response(responder.respond(session.transcript, message))
        message = result["message"]
        if result["ended"]:
            break
    return session


def test_utility_arithmetic():
    """Weighted objective matches an independent oracle to 1e-12 on 1000 tuples."""
    with criterion("utility-arithmetic"):
        rng = random.Random(20240817)
        for _ in range(1000):
            a, b, g = (rng.uniform(0, 5) for _ in range(3))
            c, l, e = rng.uniform(0, 60), rng.uniform(0, 100), rng.uniform(0, 10)
            total = utility(c, l, e, UtilityWeights(alpha=a, beta=b, gamma=g)).total
            oracle = math.fsum([a * c, -(b * l), g * e])
            assert abs(total - oracle) <= 1e-12


def test_planner_argmax():
    """Score argmax, first-on-tie, and none when every plan is unusable."""

    def plan(score):
        return RolloutPlan(
            base_turn=1,
            questions=["q"],
            simulated_responses=["a"],
            target_subtopics=["1.1"],
            score=score,
        )

    with criterion("planner-argmax"):
        best = ExplorationPlanner.select_plan([plan(0.0), plan(-2.0), plan(2.0)])
        assert best.plan.score == 2.0
        first = plan(1.0)
        assert ExplorationPlanner.select_plan([first, plan(1.0)]).plan is first
        sentinel = float("-inf")
        assert ExplorationPlanner.select_plan([]) is None
        assert ExplorationPlanner.select_plan([plan(sentinel), plan(sentinel)]) is None


def test_emergence_cap(guide):
    """At most one emergent subtopic is added per planner invocation (100 runs)."""
    rng = random.Random(7)
    topics = [t.id for t in guide.topics]

    with criterion("emergence-cap"):
        backend = covering_mock_backend()
        gateway = Gateway(backend)
        planner = ExplorationPlanner(gateway, num_rollouts=1, horizon=1, k=10_000)
        from interviewkit.model import InterviewAgenda, Transcript

        agenda = InterviewAgenda.for_guide(guide)
        transcript = Transcript()
        transcript.append_question("q")
        transcript.complete_turn("a")
        for i in range(100):
            # Vary the brainstorm behavior: null, valid, invalid parent,
            # overlong description.
            roll = rng.random()
            if roll < 0.4:
                candidate = None
            elif roll < 0.7:
                candidate = {
                    "description": f"distinct emergent theme number {i}",
                    "parent_topic_id": rng.choice(topics),
                    "rationale": "r",
                }
            elif roll < 0.85:
                candidate = {"description": "valid words here", "parent_topic_id": "999", "rationale": "r"}
            else:
                candidate = {
                    "description": " ".join(["word"] * 30),
                    "parent_topic_id": rng.choice(topics),
                    "rationale": "r",
                }
            backend.script.insert(
                0, ({"task": "emergent_brainstorm"}, json.dumps({"candidate": candidate}))
            )
            before = sum(1 for s in agenda.guide.subtopics() if s.origin.value == "emergent")
            result = planner.plan(agenda, transcript)
            planner.apply_plan(agenda, result, current_turn=1)
            after = sum(1 for s in agenda.guide.subtopics() if s.origin.value == "emergent")
            assert after - before <= 1
            backend.script.pop(0)


def test_end_to_end_mock_session(guide, clerk_profile):
    """Full 48-subtopic mock run ends by turn 49 with the predicted utility."""
    with criterion("end-to-end-mock"):
        session = SessionOrchestrator(guide, Gateway(covering_mock_backend()), SessionConfig())
        run_to_end(session, ScriptedProfileResponder(clerk_profile))
        n = len(session.transcript.completed_turns())
        assert session.phase == Phase.ENDED
        assert n <= 49
        assert session.agenda.all_covered()
        expected = 1.0 - max(0, n - 10) / 72.0
        assert abs(session.final_utility() - expected) <= 1e-9


def test_planner_cadence(guide, clerk_profile):
    """Planner runs floor(n/k) times over n completed turns."""
    with criterion("planner-cadence"):
        assert sum(should_trigger_planner(t, 2) for t in range(1, 13)) == 6
        assert sum(should_trigger_planner(t, 3) for t in range(1, 11)) == 3

        for turns, period, expected in ((12, 2, 6), (10, 3, 3)):
            session = SessionOrchestrator(
                guide,
                Gateway(covering_mock_backend()),
                SessionConfig(planner=PlannerConfig(period=period)),
            )
            calls = []
            original = session.planner.plan
            session.planner.plan = lambda *a, **k: (calls.append(1), original(*a, **k))[1]
            responder = ScriptedProfileResponder(clerk_profile)
            message = session.start()
            for _ in range(turns):
                result = session.submit_response(
                    responder.respond(session.transcript, message)
                )
                message = result["message"]
            assert len(calls) == expected


def test_readability_reference():
    """Reference sentence scores match the published formula to 1e-6."""
    with criterion("readability-reference"):
        text = "The cat sat on the mat."
        assert abs(grade_level(text) - (-1.45)) <= 1e-6
        assert abs(reading_ease(text) - 116.145) <= 1e-6


def test_dedup_contract():
    """Empty in -> empty out; known duplicates merge; idempotent on 50 fixtures."""
    with criterion("dedup-contract"):
        suite = EvaluationSuite(Gateway(covering_mock_backend()))
        assert suite.dedup([]) == []

        merged = suite.dedup(
            [
                {"subtopic_covered": "Team leadership experience", "rationale": "a"},
                {"subtopic_covered": "Leading teams", "rationale": "b"},
            ]
        )
        assert len(merged) == 1

        rng = random.Random(99)
        pool = [
            "Team leadership experience",
            "Leading teams",
            "Budget planning",
            "Planning the budget",
            "Conflict resolution",
            "Mentoring juniors",
            "Vendor negotiations",
            "Negotiating with vendors",
            "Quality audits",
            "Process documentation",
        ]
        for _ in range(50):
            items = [
                {"subtopic_covered": rng.choice(pool), "rationale": "r"}
                for _ in range(rng.randint(0, 8))
            ]
            once = dedup_covered_subtopics(items)
            twice = dedup_covered_subtopics(once)
            assert once == twice
            names = [it["subtopic_covered"] for it in once]
            assert len(names) == len(set(names))


def test_baseline_traversal(guide, small_guide):
    """Guide-order traversal, 3-attempt re-asks, supervisor cadence, 72 cap."""
    from interviewkit.baselines import (
        InterviewGptSession,
        MimiTalkSession,
        RoleplaySession,
    )
    from interviewkit.simulator import SUBTOPIC_MARKER_RE

    def markers(questions):
        return [
            m.group(1) for m in (SUBTOPIC_MARKER_RE.search(q) for q in questions) if m
        ]

    def drive(session):
        questions = [session.start()]
        while not session.ended:
            result = session.submit_response("A reasonably detailed answer.")
            if result["ended"]:
                break
            questions.append(result["message"])
        return questions

    def always_reask_backend():
        def responder(req):
            sid = parse_field(req.text(), "TARGET_SUBTOPIC_ID")
            q = f"Could you be more specific? [s:{sid}]"
            return json.dumps(
                {
                    "assistant_message": q,
                    "satisfied": False,
                    "decision": "reask",
                    "reason": "lacks specifics",
                    "question_to_ask": q,
                    "notes": "n",
                }
            )

        return MockBackend(script=[({"task": "baseline_roleplay"}, responder)])

    with criterion("baseline-traversal"):
        # |S| questions in guide order.
        gpt = InterviewGptSession(guide, Gateway(covering_mock_backend()))
        questions = drive(gpt)
        assert markers(questions) == [s.id for s in guide.subtopics()]
        assert len(gpt.transcript.completed_turns()) == len(list(guide.subtopics()))

        # Up to 3 attempts per subtopic when the judge is never satisfied.
        rp = RoleplaySession(small_guide, Gateway(always_reask_backend()))
        questions = drive(rp)
        assert markers(questions) == [
            s.id for s in small_guide.subtopics() for _ in range(3)
        ]

        # Supervisor consulted on even completed turns.
        mimi = MimiTalkSession(guide, Gateway(covering_mock_backend()), turn_cap=9)
        drive(mimi)
        assert mimi.supervisor_turns == [2, 4, 6, 8]

        # Hard cap at 72 turns.
        capped = RoleplaySession(guide, Gateway(always_reask_backend()), turn_cap=72)
        drive(capped)
        assert len(capped.transcript.completed_turns()) == 72


def test_persistence_replay(small_guide, guide, clerk_profile, tmp_path):
    """Replay is bit-identical across 20 sessions; mid-session resume works."""
    with criterion("persistence-replay"):
        for i in range(20):
            use_guide = small_guide if i % 2 else guide
            log_path = str(tmp_path / f"events-{i}.jsonl")
            config = SessionConfig(log_path=log_path, turn_cap=6 + i)
            session = SessionOrchestrator(use_guide, Gateway(covering_mock_backend()), config)
            run_to_end(session, ScriptedProfileResponder(clerk_profile))
            agenda, transcript, ended = ev.replay(use_guide, ev.read_log(log_path))
            assert ended
            assert canonical_json(agenda.to_dict()) == canonical_json(session.agenda.to_dict())
            assert canonical_json(transcript.to_dict()) == canonical_json(
                session.transcript.to_dict()
            )

        # Mid-session resume: drop after 2 answers, resume, finish.
        log_path = str(tmp_path / "resume.jsonl")
        config = SessionConfig(log_path=log_path)
        session = SessionOrchestrator(small_guide, Gateway(covering_mock_backend()), config)
        responder = ScriptedProfileResponder(clerk_profile)
        message = session.start()
        for _ in range(2):
            result = session.submit_response(responder.respond(session.transcript, message))
            message = result["message"]
        resumed = SessionOrchestrator.resume(
            small_guide, Gateway(covering_mock_backend()), config
        )
        assert resumed.phase == Phase.ACTIVE
        assert canonical_json(resumed.agenda.to_dict()) == canonical_json(
            session.agenda.to_dict()
        )
        message = resumed.transcript.turns[-1].question
        while resumed.phase != Phase.ENDED:
            result = resumed.submit_response(
                responder.respond(resumed.transcript, message)
            )
            message = result["message"]
            if result["ended"]:
                break
        assert resumed.agenda.all_covered()


def test_judge_schema_safety():
    """Out-of-range judge scores are dropped and counted, never clamped."""
    with criterion("judge-schema-safety"):
        backend = QueueBackend([json.dumps({"score": 7}), json.dumps({"score": 7})])
        suite = EvaluationSuite(Gateway(backend))
        assert suite.judge_subtopic_coverage("facts", "notes") is None
        assert suite.exclusions == {"coverage": 1}

        backend = QueueBackend([json.dumps({"score": 0}), json.dumps({"score": 0})])
        suite = EvaluationSuite(Gateway(backend))
        assert suite.judge_subtopic_coverage("facts", "notes") is None
        assert suite.exclusions == {"coverage": 1}

        # In-range scores are mapped, not altered.
        suite = EvaluationSuite(Gateway(QueueBackend([json.dumps({"score": 5})])))
        assert suite.judge_subtopic_coverage("facts", "notes") == 1.0


@pytest.mark.skipif(
    not (os.getenv(ENV_API_BASE) and os.getenv(ENV_API_KEY)),
    reason="live smoke needs remote model credentials",
)
def test_live_smoke(small_guide):
    """Non-gating: one short turn against the configured remote backend."""
    from interviewkit.gateway import OpenAIBackend

    with criterion("live-smoke"):
        session = SessionOrchestrator(
            small_guide, Gateway(OpenAIBackend()), SessionConfig(turn_cap=2)
        )
        message = session.start()
        assert message.strip()
        result = session.submit_response("I currently work as a scheduler.")
        assert result["message"].strip()
