import pytest

from interviewkit import events as ev
from interviewkit.gateway import Gateway
from interviewkit.interviewer import SessionEndedError
from interviewkit.mocks import covering_mock_backend
from interviewkit.model import canonical_json
from interviewkit.orchestrator import (
    Phase,
    PlannerConfig,
    SessionConfig,
    SessionOrchestrator,
    should_trigger_planner,
)
from interviewkit.simulator import ScriptedProfileResponder


def run_to_end(session, responder, max_rounds=200):
    message = session.start()
    for _ in range(max_rounds):
        if session.phase == Phase.ENDED:
            break
        reply = responder.respond(session.transcript, message)
        result = session.submit_response(reply)
        message = result["message"]
        if result["ended"]:
            break
    return session


class TestPlannerCadence:
    def test_trigger_function(self):
        assert sum(should_trigger_planner(t, 2) for t in range(1, 13)) == 6
        assert sum(should_trigger_planner(t, 3) for t in range(1, 11)) == 3
        assert not should_trigger_planner(0, 2)


class TestTurnLoop:
    def test_opening_counts_as_first_turn(self, small_guide, mock_gateway, clerk_profile):
        session = SessionOrchestrator(small_guide, mock_gateway, SessionConfig())
        message = session.start()
        assert session.phase == Phase.ACTIVE
        assert len(session.transcript.turns) == 1
        assert "[s:1.1]" in message  # first target is the first guide subtopic
        assert session.agenda.current_in_progress() == "1.1"

    def test_full_session_covers_everything(self, small_guide, mock_gateway, clerk_profile):
        session = SessionOrchestrator(small_guide, mock_gateway, SessionConfig())
        run_to_end(session, ScriptedProfileResponder(clerk_profile))
        assert session.phase == Phase.ENDED
        assert session.agenda.all_covered()
        assert len(session.transcript.completed_turns()) == 4

    def test_submit_after_end_raises(self, small_guide, mock_gateway, clerk_profile):
        session = SessionOrchestrator(small_guide, mock_gateway, SessionConfig())
        run_to_end(session, ScriptedProfileResponder(clerk_profile))
        with pytest.raises(SessionEndedError):
            session.submit_response("more")

    def test_turn_cap_enforced(self, guide, clerk_profile):
        class NeverCover:
            def complete(self, req):
                text = req.text()
                if text.startswith("TASK: coverage_assessment"):
                    return '{"covered": false, "framework": "Descriptive", "rationale": "r"}'
                backend = covering_mock_backend()
                return backend.complete(req)

        session = SessionOrchestrator(
            guide, Gateway(NeverCover()), SessionConfig(turn_cap=7)
        )
        run_to_end(session, ScriptedProfileResponder(clerk_profile))
        assert len(session.transcript.completed_turns()) == 7
        assert session.phase == Phase.ENDED

    def test_blank_response_consumes_turn(self, small_guide, mock_gateway):
        session = SessionOrchestrator(small_guide, mock_gateway, SessionConfig())
        session.start()
        result = session.submit_response("")
        assert result["turn"] == 1
        assert session.transcript.turns[0].response == ""

    def test_utility_series_row_per_turn(self, small_guide, mock_gateway, clerk_profile):
        session = SessionOrchestrator(small_guide, mock_gateway, SessionConfig())
        run_to_end(session, ScriptedProfileResponder(clerk_profile))
        turns = [row["turn"] for row in session.utility_series]
        assert turns == list(range(1, len(session.transcript.completed_turns()) + 1))
        for row in session.utility_series:
            assert set(row) == {"turn", "C_sum", "L", "E_sum", "U"}

    def test_utility_csv(self, small_guide, mock_gateway, clerk_profile, tmp_path):
        session = SessionOrchestrator(small_guide, mock_gateway, SessionConfig())
        run_to_end(session, ScriptedProfileResponder(clerk_profile))
        path = tmp_path / "utility_series.csv"
        session.write_utility_series(str(path))
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "turn,C_sum,L,E_sum,U"
        assert len(lines) == 1 + len(session.utility_series)


class TestEventLogAndResume:
    def test_replay_matches_live_state(self, small_guide, mock_gateway, clerk_profile, tmp_path):
        config = SessionConfig(log_path=str(tmp_path / "events.jsonl"))
        session = SessionOrchestrator(small_guide, mock_gateway, config)
        run_to_end(session, ScriptedProfileResponder(clerk_profile))
        agenda, transcript, ended = ev.replay(small_guide, ev.read_log(config.log_path))
        assert ended
        assert canonical_json(agenda.to_dict()) == canonical_json(session.agenda.to_dict())
        assert canonical_json(transcript.to_dict()) == canonical_json(
            session.transcript.to_dict()
        )

    def test_mid_session_resume_continues_to_same_end(
        self, small_guide, mock_gateway, clerk_profile, tmp_path
    ):
        log_path = str(tmp_path / "events.jsonl")
        config = SessionConfig(log_path=log_path)
        session = SessionOrchestrator(small_guide, mock_gateway, config)
        responder = ScriptedProfileResponder(clerk_profile)
        message = session.start()
        # Answer two turns, then drop the session.
        for _ in range(2):
            result = session.submit_response(responder.respond(session.transcript, message))
            message = result["message"]

        resumed = SessionOrchestrator.resume(small_guide, mock_gateway, config)
        assert resumed.phase == Phase.ACTIVE
        assert canonical_json(resumed.agenda.to_dict()) == canonical_json(
            session.agenda.to_dict()
        )
        run_to_end_from_active(resumed, ScriptedProfileResponder(clerk_profile))
        assert resumed.phase == Phase.ENDED
        assert resumed.agenda.all_covered()

    def test_resume_of_ended_session(self, small_guide, mock_gateway, clerk_profile, tmp_path):
        config = SessionConfig(log_path=str(tmp_path / "events.jsonl"))
        session = SessionOrchestrator(small_guide, mock_gateway, config)
        run_to_end(session, ScriptedProfileResponder(clerk_profile))
        resumed = SessionOrchestrator.resume(small_guide, mock_gateway, config)
        assert resumed.phase == Phase.ENDED


def run_to_end_from_active(session, responder, max_rounds=200):
    message = session.transcript.turns[-1].question
    for _ in range(max_rounds):
        if session.phase == Phase.ENDED:
            break
        result = session.submit_response(responder.respond(session.transcript, message))
        message = result["message"]
        if result["ended"]:
            break
    return session
