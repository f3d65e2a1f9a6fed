"""Provider-agnostic chat-completion access.

Two backends: an OpenAI-compatible HTTP backend (endpoint + credential from
configuration or environment) and a deterministic scripted mock for offline
tests. ``complete_json`` layers schema-constrained parsing on top, with code
fence stripping, prose trimming, and exactly one repair reprompt before
failing.
"""

from __future__ import annotations

import json
import os
import re
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import jsonschema
import requests

VALID_ROLES = ("system", "user", "assistant")

ENV_API_BASE = "INTERVIEW_API_BASE"
ENV_API_KEY = "INTERVIEW_API_KEY"
ENV_MODEL = "INTERVIEW_MODEL"


class GatewayError(Exception):
    pass


class TransportError(GatewayError):
    def __init__(self, message: str, retryable: bool = False):
        super().__init__(message)
        self.retryable = retryable


class AuthRejectedError(GatewayError):
    pass


class ContextTooLongError(GatewayError):
    pass


class MalformedOutputError(GatewayError):
    def __init__(self, message: str, raw_outputs: Sequence[str] = ()):
        super().__init__(message)
        self.raw_outputs = list(raw_outputs)


@dataclass(frozen=True)
class Message:
    role: str
    content: str

    def __post_init__(self) -> None:
        if self.role not in VALID_ROLES:
            raise ValueError(f"invalid role {self.role!r}")


@dataclass
class ChatRequest:
    messages: List[Message]
    temperature: float = 0.2
    max_output_tokens: int = 1024
    seed: Optional[int] = None
    response_schema: Optional[Dict[str, Any]] = None

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValueError("request needs at least one message")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")

    def text(self) -> str:
        return "\n".join(m.content for m in self.messages)


def request(
    system: Optional[str],
    user: str,
    *,
    temperature: float = 0.2,
    seed: Optional[int] = None,
    response_schema: Optional[Dict[str, Any]] = None,
) -> ChatRequest:
    messages = []
    if system:
        messages.append(Message("system", system))
    messages.append(Message("user", user))
    return ChatRequest(
        messages=messages,
        temperature=temperature,
        seed=seed,
        response_schema=response_schema,
    )


# ---------------------------------------------------------------------------
# Backends

Matcher = Union[Callable[[ChatRequest], bool], Dict[str, str]]
Responder = Union[str, Callable[[ChatRequest], str]]


def _matches(matcher: Matcher, req: ChatRequest) -> bool:
    if callable(matcher):
        return bool(matcher(req))
    text = req.text()
    if "contains" in matcher and matcher["contains"] not in text:
        return False
    if "task" in matcher and not text.startswith(f"TASK: {matcher['task']}"):
        return False
    return True


def _respond(responder: Responder, req: ChatRequest) -> str:
    return responder(req) if callable(responder) else responder


@dataclass
class MockBackend:
    """Deterministic scripted backend: first matching rule wins, else default.

    Calls are serialized through a lock so concurrent pipelines still see a
    deterministic response order.
    """

    script: List[Tuple[Matcher, Responder]] = field(default_factory=list)
    default: Responder = ""
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def complete(self, req: ChatRequest) -> str:
        with self._lock:
            for matcher, responder in self.script:
                if _matches(matcher, req):
                    return _respond(responder, req)
            return _respond(self.default, req)


def load_mock_script(path: str) -> MockBackend:
    """Load a mock script from a JSON fixture file.

    Format: {"rules": [{"contains": ..., "task": ..., "response": ...}],
    "default": ...}
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    script: List[Tuple[Matcher, Responder]] = []
    for rule in data.get("rules", []):
        matcher = {k: rule[k] for k in ("contains", "task") if k in rule}
        script.append((matcher, rule["response"]))
    return MockBackend(script=script, default=data.get("default", ""))


class QueueBackend:
    """Returns canned responses in order; repeats the last when exhausted."""

    def __init__(self, responses: Sequence[str]):
        if not responses:
            raise ValueError("need at least one response")
        self.responses = list(responses)
        self.calls: List[ChatRequest] = []
        self._lock = threading.Lock()

    def complete(self, req: ChatRequest) -> str:
        with self._lock:
            self.calls.append(req)
            i = min(len(self.calls) - 1, len(self.responses) - 1)
            return self.responses[i]


class OpenAIBackend:
    """OpenAI-compatible chat-completions over HTTPS."""

    def __init__(
        self,
        endpoint: Optional[str] = None,
        model: Optional[str] = None,
        api_key: Optional[str] = None,
        timeout: float = 120.0,
        session: Optional[Any] = None,
    ):
        self.endpoint = endpoint or os.getenv(ENV_API_BASE, "")
        self.model = model or os.getenv(ENV_MODEL, "")
        self.api_key = api_key if api_key is not None else os.getenv(ENV_API_KEY, "")
        self.timeout = timeout
        self.session = session or requests.Session()
        if not self.endpoint:
            raise ValueError(f"remote backend needs an endpoint URL ({ENV_API_BASE})")
        if not self.api_key:
            raise AuthRejectedError(f"missing API credential ({ENV_API_KEY})")

    def complete(self, req: ChatRequest) -> str:
        payload: Dict[str, Any] = {
            "model": self.model,
            "messages": [{"role": m.role, "content": m.content} for m in req.messages],
            "temperature": req.temperature,
            "max_tokens": req.max_output_tokens,
        }
        if req.seed is not None:
            payload["seed"] = req.seed
        url = self.endpoint.rstrip("/") + "/chat/completions"
        try:
            resp = self.session.post(
                url,
                json=payload,
                headers={"Authorization": f"Bearer {self.api_key}"},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TransportError(f"transport failure: {exc}", retryable=True) from exc
        if resp.status_code in (401, 403):
            raise AuthRejectedError(f"credential rejected (HTTP {resp.status_code})")
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransportError(f"HTTP {resp.status_code}", retryable=True)
        if resp.status_code >= 400:
            body = resp.text
            if "context" in body.lower() and "length" in body.lower():
                raise ContextTooLongError(body[:500])
            raise TransportError(f"HTTP {resp.status_code}: {body[:500]}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise TransportError(f"unexpected response shape: {exc}") from exc


# ---------------------------------------------------------------------------
# JSON extraction

_FENCE_RE = re.compile(r"```(?:json)?\s*(.*?)```", re.DOTALL)


def extract_json(text: str) -> Any:
    """Parse a JSON value out of model output.

    Strips code fences, then tries a direct parse, then scans for the first
    decodable JSON object or array embedded in prose.
    """
    text = text.strip()
    fence = _FENCE_RE.search(text)
    if fence:
        text = fence.group(1).strip()
    try:
        return json.loads(text)
    except ValueError:
        pass
    decoder = json.JSONDecoder()
    for i, ch in enumerate(text):
        if ch in "[{":
            try:
                value, _ = decoder.raw_decode(text[i:])
                return value
            except ValueError:
                continue
    raise ValueError("no JSON value found")


REPAIR_INSTRUCTION = (
    "Your previous reply was not valid JSON. Return only valid JSON matching "
    "the required schema, with no code fences, commentary, or extra text."
)


class Gateway:
    """Retrying front door over a backend, with structured-output parsing."""

    def __init__(
        self,
        backend: Any,
        max_retries: int = 3,
        backoff: float = 0.5,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.backend = backend
        self.max_retries = max_retries
        self.backoff = backoff
        self.sleep = sleep

    def complete(self, req: ChatRequest) -> str:
        attempt = 0
        while True:
            try:
                return self.backend.complete(req)
            except TransportError as exc:
                if not exc.retryable or attempt >= self.max_retries:
                    raise
                self.sleep(self.backoff * (2**attempt))
                attempt += 1

    def complete_json(self, req: ChatRequest) -> Any:
        if req.response_schema is None:
            raise ValueError("complete_json requires a response_schema")
        raw = self.complete(req)
        value = self._try_parse(raw, req.response_schema)
        if value is not _PARSE_FAILED:
            return value
        repair = ChatRequest(
            messages=list(req.messages)
            + [Message("assistant", raw), Message("user", REPAIR_INSTRUCTION)],
            temperature=0.0,
            max_output_tokens=req.max_output_tokens,
            seed=req.seed,
            response_schema=req.response_schema,
        )
        raw2 = self.complete(repair)
        value = self._try_parse(raw2, req.response_schema)
        if value is not _PARSE_FAILED:
            return value
        raise MalformedOutputError(
            "model output failed schema validation after one repair attempt",
            raw_outputs=[raw, raw2],
        )

    @staticmethod
    def _try_parse(raw: str, schema: Dict[str, Any]) -> Any:
        try:
            value = extract_json(raw)
            jsonschema.validate(value, schema)
            return value
        except (ValueError, jsonschema.ValidationError):
            return _PARSE_FAILED


class _ParseFailed:
    pass


_PARSE_FAILED = _ParseFailed()
