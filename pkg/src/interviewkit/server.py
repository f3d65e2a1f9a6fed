"""HTTP front end for live interview sessions.

Endpoints:
- ``POST /sessions`` create a session (inline guide or server-side guide
  path) and receive the opening message.
- ``POST /sessions/{id}/messages`` submit an interviewee response, receive
  the next interviewer message.
- ``GET /sessions/{id}/agenda`` current agenda state.
- ``GET /sessions/{id}/events`` Server-Sent Events stream of the event log.
- ``GET /healthz`` liveness probe.

Sessions live in process memory; the event log still mirrors to disk when a
log path is configured, so a restarted server can resume from the log.
"""

from __future__ import annotations

import asyncio
import json
import os
import threading
from typing import Any, Callable, Dict, Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse
from pydantic import BaseModel

from .gateway import ENV_API_BASE, Gateway, OpenAIBackend
from .mocks import covering_mock_backend
from .model import GuideValidationError, TopicGuide, load_guide, validate_guide
from .orchestrator import Phase, PlannerConfig, SessionConfig, SessionOrchestrator

SSE_POLL_SECONDS = 0.1


class CreateSessionRequest(BaseModel):
    guide: Optional[Dict[str, Any]] = None
    guide_path: Optional[str] = None
    turn_cap: int = 72
    planner_period: int = 2
    seed: Optional[int] = None


class MessageRequest(BaseModel):
    response: str


def default_gateway() -> Gateway:
    """Remote backend when configured via environment, scripted mock otherwise."""
    if os.getenv(ENV_API_BASE):
        return Gateway(OpenAIBackend())
    return Gateway(covering_mock_backend())


class SessionStore:
    def __init__(self) -> None:
        self._sessions: Dict[str, SessionOrchestrator] = {}
        self._lock = threading.Lock()

    def add(self, session: SessionOrchestrator) -> None:
        with self._lock:
            self._sessions[session.session_id] = session

    def get(self, session_id: str) -> SessionOrchestrator:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return session


def create_app(
    gateway_factory: Callable[[], Gateway] = default_gateway,
    guide_root: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="interviewkit")
    store = SessionStore()
    app.state.sessions = store

    @app.get("/healthz")
    def healthz() -> Dict[str, str]:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionRequest) -> Dict[str, Any]:
        try:
            if body.guide is not None:
                guide = validate_guide(TopicGuide.from_dict(body.guide))
            elif body.guide_path is not None:
                path = body.guide_path
                if guide_root is not None:
                    path = os.path.join(guide_root, os.path.basename(path))
                guide = load_guide(path)
            else:
                raise HTTPException(status_code=422, detail="guide or guide_path required")
        except GuideValidationError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except OSError as exc:
            raise HTTPException(status_code=404, detail=f"guide not found: {exc}") from exc
        config = SessionConfig(
            turn_cap=body.turn_cap,
            planner=PlannerConfig(period=body.planner_period),
            seed=body.seed,
        )
        session = SessionOrchestrator(guide, gateway_factory(), config)
        message = session.start()
        store.add(session)
        return {
            "session_id": session.session_id,
            "message": message,
            "ended": session.phase == Phase.ENDED,
        }

    @app.post("/sessions/{session_id}/messages")
    def post_message(session_id: str, body: MessageRequest) -> Dict[str, Any]:
        session = store.get(session_id)
        if session.phase == Phase.ENDED:
            raise HTTPException(status_code=409, detail="session has ended")
        result = session.submit_response(body.response)
        return {"session_id": session_id, **result}

    @app.get("/sessions/{session_id}/agenda")
    def get_agenda(session_id: str) -> Dict[str, Any]:
        session = store.get(session_id)
        return {
            "session_id": session_id,
            "phase": session.phase.value,
            "agenda": session.agenda.to_dict(),
            "utility_series": session.utility_series,
        }

    @app.get("/sessions/{session_id}/events")
    async def stream_events(session_id: str) -> StreamingResponse:
        session = store.get(session_id)

        async def generate():
            cursor = 0
            while True:
                events = session.log.events
                while cursor < len(events):
                    event = events[cursor]
                    cursor += 1
                    yield f"event: {event['kind']}\ndata: {json.dumps(event)}\n\n"
                if session.phase == Phase.ENDED and cursor >= len(session.log.events):
                    yield "event: stream_end\ndata: {}\n\n"
                    return
                await asyncio.sleep(SSE_POLL_SECONDS)

        return StreamingResponse(generate(), media_type="text/event-stream")

    return app


app = create_app()
