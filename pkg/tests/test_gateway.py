import json

import pytest

from interviewkit.gateway import (
    AuthRejectedError,
    ChatRequest,
    ContextTooLongError,
    Gateway,
    MalformedOutputError,
    Message,
    MockBackend,
    OpenAIBackend,
    QueueBackend,
    TransportError,
    extract_json,
    request,
)

SCHEMA = {"type": "object", "properties": {"x": {"type": "integer"}}, "required": ["x"]}


class TestRequest:
    def test_roles_validated(self):
        with pytest.raises(ValueError):
            Message("tool", "hi")

    def test_needs_messages(self):
        with pytest.raises(ValueError):
            ChatRequest(messages=[])

    def test_temperature_nonnegative(self):
        with pytest.raises(ValueError):
            request("s", "u", temperature=-0.1)


class TestMockBackend:
    def test_first_matching_rule_wins(self):
        backend = MockBackend(
            script=[({"task": "a"}, "first"), ({"contains": "hello"}, "second")],
            default="fallback",
        )
        assert backend.complete(request("TASK: a\nrest", "hello")) == "first"
        assert backend.complete(request("TASK: b", "hello there")) == "second"
        assert backend.complete(request("TASK: b", "nothing")) == "fallback"

    def test_callable_responder_sees_request(self):
        backend = MockBackend(script=[({"task": "echo"}, lambda r: r.messages[-1].content)])
        assert backend.complete(request("TASK: echo", "payload")) == "payload"


class TestExtractJson:
    def test_plain(self):
        assert extract_json('{"a": 1}') == {"a": 1}

    def test_fenced(self):
        assert extract_json('```json\n{"a": 1}\n```') == {"a": 1}

    def test_embedded_in_prose(self):
        assert extract_json('Sure! Here it is: {"a": 1} hope that helps') == {"a": 1}

    def test_array(self):
        assert extract_json("[1, 2]") == [1, 2]

    def test_no_json_raises(self):
        with pytest.raises(ValueError):
            extract_json("no structured content here")


class TestRetries:
    def test_retryable_transport_error_retried(self):
        calls = []

        class Flaky:
            def complete(self, req):
                calls.append(req)
                if len(calls) < 3:
                    raise TransportError("busy", retryable=True)
                return "ok"

        gw = Gateway(Flaky(), sleep=lambda s: None)
        assert gw.complete(request("s", "u")) == "ok"
        assert len(calls) == 3

    def test_non_retryable_raises_immediately(self):
        calls = []

        class Broken:
            def complete(self, req):
                calls.append(req)
                raise TransportError("bad request", retryable=False)

        gw = Gateway(Broken(), sleep=lambda s: None)
        with pytest.raises(TransportError):
            gw.complete(request("s", "u"))
        assert len(calls) == 1

    def test_gives_up_after_max_retries(self):
        calls = []

        class AlwaysBusy:
            def complete(self, req):
                calls.append(req)
                raise TransportError("busy", retryable=True)

        gw = Gateway(AlwaysBusy(), max_retries=2, sleep=lambda s: None)
        with pytest.raises(TransportError):
            gw.complete(request("s", "u"))
        assert len(calls) == 3  # initial + 2 retries


class TestCompleteJson:
    def test_valid_output_parsed(self):
        gw = Gateway(QueueBackend(['{"x": 1}']))
        assert gw.complete_json(request("s", "u", response_schema=SCHEMA)) == {"x": 1}

    def test_one_repair_attempt(self):
        backend = QueueBackend(["not json at all", '{"x": 2}'])
        gw = Gateway(backend)
        assert gw.complete_json(request("s", "u", response_schema=SCHEMA)) == {"x": 2}
        repair = backend.calls[1]
        assert repair.messages[-2].role == "assistant"
        assert repair.messages[-2].content == "not json at all"
        assert repair.temperature == 0.0

    def test_fails_after_second_bad_output(self):
        backend = QueueBackend(["junk one", "junk two"])
        gw = Gateway(backend)
        with pytest.raises(MalformedOutputError) as err:
            gw.complete_json(request("s", "u", response_schema=SCHEMA))
        assert err.value.raw_outputs == ["junk one", "junk two"]
        assert len(backend.calls) == 2

    def test_schema_violation_triggers_repair(self):
        backend = QueueBackend([json.dumps({"x": "not an int"}), '{"x": 3}'])
        gw = Gateway(backend)
        assert gw.complete_json(request("s", "u", response_schema=SCHEMA)) == {"x": 3}

    def test_schema_required(self):
        gw = Gateway(QueueBackend(["{}"]))
        with pytest.raises(ValueError):
            gw.complete_json(request("s", "u"))


class FakeResponse:
    def __init__(self, status_code, payload=None, text=""):
        self.status_code = status_code
        self._payload = payload
        self.text = text

    def json(self):
        if self._payload is None:
            raise ValueError("no json")
        return self._payload


class FakeSession:
    def __init__(self, response):
        self.response = response
        self.requests = []

    def post(self, url, **kwargs):
        self.requests.append((url, kwargs))
        return self.response


class TestOpenAIBackend:
    def make(self, response):
        session = FakeSession(response)
        backend = OpenAIBackend(
            endpoint="https://api.example.test/v1",
            model="test-model",
            api_key="key",
            session=session,
        )
        return backend, session

    def test_missing_key_rejected(self, monkeypatch):
        monkeypatch.delenv("INTERVIEW_API_KEY", raising=False)
        with pytest.raises(AuthRejectedError):
            OpenAIBackend(endpoint="https://api.example.test", model="m", api_key="")

    def test_success_parses_content(self):
        payload = {"choices": [{"message": {"content": "hello"}}]}
        backend, session = self.make(FakeResponse(200, payload))
        assert backend.complete(request("s", "u", seed=7)) == "hello"
        url, kwargs = session.requests[0]
        assert url.endswith("/chat/completions")
        assert kwargs["json"]["seed"] == 7
        assert kwargs["headers"]["Authorization"] == "Bearer key"

    def test_auth_rejection(self):
        backend, _ = self.make(FakeResponse(401))
        with pytest.raises(AuthRejectedError):
            backend.complete(request("s", "u"))

    def test_rate_limit_is_retryable(self):
        backend, _ = self.make(FakeResponse(429))
        with pytest.raises(TransportError) as err:
            backend.complete(request("s", "u"))
        assert err.value.retryable

    def test_context_too_long(self):
        backend, _ = self.make(
            FakeResponse(400, text="maximum context length exceeded for this model")
        )
        with pytest.raises(ContextTooLongError):
            backend.complete(request("s", "u"))
