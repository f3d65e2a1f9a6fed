"""Shipped deterministic mock model behaviors.

These rule-based responders emulate every internal model task well enough to
run full sessions, baselines, and evaluations completely offline. Question
responses embed a ``[s:<subtopic_id>]`` marker so the scripted interviewee
can answer from the matching profile section; note extraction attaches the
latest response to the in-progress subtopic; coverage flips to covered as
soon as a note exists. A full run therefore covers exactly one subtopic per
turn.
"""

from __future__ import annotations

import json
import re
import string
from typing import Any, Dict, List, Optional

from .gateway import ChatRequest, MockBackend

_FIELD_RES: Dict[str, re.Pattern] = {}


def parse_field(text: str, name: str) -> Optional[str]:
    """Extract the value of a ``NAME: value`` context line from a prompt."""
    pattern = _FIELD_RES.setdefault(name, re.compile(rf"^{re.escape(name)}: (.*)$", re.MULTILINE))
    match = pattern.search(text)
    return match.group(1).strip() if match else None


# ---------------------------------------------------------------------------
# Deterministic semantic deduplication

_CANON_TOKENS = {
    "leading": "lead",
    "leadership": "lead",
    "leader": "lead",
    "leads": "lead",
    "teams": "team",
    "managing": "manage",
    "management": "manage",
}

_FILLER_TOKENS = {"a", "an", "the", "of", "in", "with", "for", "experience", "experiences"}

_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


def _token_signature(phrase: str) -> frozenset:
    tokens = phrase.lower().translate(_PUNCT_TABLE).split()
    return frozenset(_CANON_TOKENS.get(t, t) for t in tokens if t not in _FILLER_TOKENS)


def dedup_covered_subtopics(items: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """Merge semantically duplicate covered-subtopic entries.

    Two entries merge when one's content-token signature is a subset of the
    other's. Each group keeps the most concise phrasing as canonical and
    joins the rationales. The operation is idempotent and [] maps to [].
    """
    groups: List[List[Dict[str, Any]]] = []
    signatures: List[frozenset] = []
    for item in items:
        sig = _token_signature(item["subtopic_covered"])
        placed = False
        for i, existing in enumerate(signatures):
            if sig and existing and (sig <= existing or existing <= sig):
                groups[i].append(item)
                signatures[i] = existing | sig
                placed = True
                break
        if not placed:
            groups.append([item])
            signatures.append(sig)
    merged: List[Dict[str, Any]] = []
    for group in groups:
        canonical = min(
            group,
            key=lambda it: (
                len(it["subtopic_covered"].split()),
                len(it["subtopic_covered"]),
            ),
        )
        rationales = [it.get("rationale", "") for it in group if it.get("rationale")]
        seen: List[str] = []
        for r in rationales:
            if r not in seen:
                seen.append(r)
        merged.append(
            {"subtopic_covered": canonical["subtopic_covered"], "rationale": " ".join(seen)}
        )
    return merged


_DEDUP_LINE_RE = re.compile(r"^- (.*?): ?(.*)$")


def _dedup_responder(req: ChatRequest) -> str:
    items: List[Dict[str, Any]] = []
    in_list = False
    for line in req.text().splitlines():
        if line.startswith("COVERED_SUBTOPICS:"):
            in_list = True
            continue
        if in_list:
            match = _DEDUP_LINE_RE.match(line)
            if match:
                items.append(
                    {"subtopic_covered": match.group(1), "rationale": match.group(2)}
                )
    return json.dumps(dedup_covered_subtopics(items))


# ---------------------------------------------------------------------------
# Task responders


def _question_responder(req: ChatRequest) -> str:
    text = req.text()
    sid = parse_field(text, "TARGET_SUBTOPIC_ID")
    desc = parse_field(text, "TARGET_SUBTOPIC")
    if not sid or sid == "(none)":
        return "Could you tell me more about that?"
    return f"Could you tell me about this: {desc or sid}? [s:{sid}]"


def _note_extraction_responder(req: ChatRequest) -> str:
    text = req.text()
    response = parse_field(text, "LATEST_RESPONSE") or ""
    current = parse_field(text, "CURRENT_SUBTOPIC_ID")
    if not response or "happy to start" in response.lower():
        return json.dumps({"notes": []})
    subtopic_id = None if current in (None, "(none)") else current
    return json.dumps(
        {"notes": [{"subtopic_id": subtopic_id, "topic_id": None, "text": response}]}
    )


def _coverage_responder(req: ChatRequest) -> str:
    covered = "(no notes)" not in req.text()
    return json.dumps(
        {
            "covered": covered,
            "framework": "Descriptive",
            "rationale": "notes present" if covered else "no notes recorded",
        }
    )


def _summary_responder(req: ChatRequest) -> str:
    return json.dumps({"summary": "Key points consolidated from the recorded notes."})


def _roleplay_responder(req: ChatRequest) -> str:
    sid = parse_field(req.text(), "TARGET_SUBTOPIC_ID")
    desc = parse_field(req.text(), "TARGET_SUBTOPIC")
    question = f"Could you tell me about this: {desc or sid}? [s:{sid}]"
    return json.dumps(
        {
            "assistant_message": question,
            "satisfied": True,
            "decision": "ask_next",
            "reason": "response was specific",
            "question_to_ask": question,
            "notes": "Interviewee gave a specific answer.",
        }
    )


def _interviewgpt_responder(req: ChatRequest) -> str:
    sid = parse_field(req.text(), "TARGET_SUBTOPIC_ID")
    desc = parse_field(req.text(), "TARGET_SUBTOPIC")
    return json.dumps(
        {
            "assistant_message": f"Could you tell me about this: {desc or sid}? [s:{sid}]",
            "notes": "Interviewee described their view.",
        }
    )


def _mimitalk_responder(req: ChatRequest) -> str:
    sid = parse_field(req.text(), "TARGET_SUBTOPIC_ID")
    desc = parse_field(req.text(), "TARGET_SUBTOPIC")
    return json.dumps(
        {
            "question_to_ask": f"Could you tell me about this: {desc or sid}? [s:{sid}]",
            "notes": "Interviewee described their experience.",
        }
    )


def covering_mock_backend() -> MockBackend:
    """A backend whose policy covers exactly one subtopic per completed turn."""
    return MockBackend(
        script=[
            ({"task": "question_generation"}, _question_responder),
            ({"task": "note_extraction"}, _note_extraction_responder),
            ({"task": "coverage_assessment"}, _coverage_responder),
            ({"task": "subtopic_summary"}, _summary_responder),
            ({"task": "topic_summary"}, _summary_responder),
            ({"task": "rollout_question"}, "What would you explore next, hypothetically?"),
            ({"task": "rollout_response"}, "I would likely mention another workplace detail."),
            ({"task": "rollout_emergence"}, json.dumps({"emergence": 0, "rationale": "none"})),
            ({"task": "emergent_brainstorm"}, json.dumps({"candidate": None})),
            ({"task": "simulator_response"}, "I'm happy to start the interview."),
            ({"task": "eval_coverage"}, json.dumps({"score": 5})),
            ({"task": "eval_emergent_identify"}, "[]"),
            ({"task": "eval_emergent_coverage"}, "[]"),
            ({"task": "eval_dedup"}, _dedup_responder),
            (
                {"task": "eval_coherence"},
                json.dumps(
                    {
                        "local_coherence": 4,
                        "transition_quality": 4,
                        "contingent_responsiveness": 4,
                        "brief_rationale": "consistent questioning",
                    }
                ),
            ),
            ({"task": "eval_leading"}, json.dumps({"score": 3, "rationale": "clean"})),
            ({"task": "baseline_roleplay"}, _roleplay_responder),
            ({"task": "baseline_interviewgpt"}, _interviewgpt_responder),
            ({"task": "baseline_mimitalk_interviewer"}, _mimitalk_responder),
            (
                {"task": "baseline_mimitalk_supervisor"},
                "Coverage is progressing; continue through the remaining subtopics in order.",
            ),
        ],
        default="I understand.",
    )
