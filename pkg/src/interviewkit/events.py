"""Append-only JSONL event log and state reconstruction by replay.

One JSON object per line. Event kinds: ``turn``, ``note``, ``status_change``,
``summary``, ``planner_result``, ``session_end``. The log is the single
source of truth for a session: replaying it reconstructs the final
(agenda, transcript) pair exactly, which is also how mid-session resume
works.
"""

from __future__ import annotations

import json
import os
from typing import Any, Dict, Iterable, List, Optional, Tuple

from .model import (
    InterviewAgenda,
    Note,
    Origin,
    Status,
    Subtopic,
    SubtopicEntry,
    TopicGuide,
    Transcript,
    Turn,
    canonical_json,
)

TURN = "turn"
NOTE = "note"
STATUS_CHANGE = "status_change"
SUMMARY = "summary"
PLANNER_RESULT = "planner_result"
SESSION_END = "session_end"

EVENT_KINDS = (TURN, NOTE, STATUS_CHANGE, SUMMARY, PLANNER_RESULT, SESSION_END)


class EventLog:
    """In-memory event sequence, optionally mirrored to a JSONL file."""

    def __init__(self, path: Optional[str] = None):
        self.path = path
        self.events: List[Dict[str, Any]] = []
        if path and os.path.exists(path):
            self.events = list(read_log(path))

    def append(self, event: Dict[str, Any]) -> Dict[str, Any]:
        if event.get("kind") not in EVENT_KINDS:
            raise ValueError(f"unknown event kind: {event.get('kind')}")
        event = dict(event)
        event["seq"] = len(self.events) + 1
        self.events.append(event)
        if self.path:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(canonical_json(event) + "\n")
        return event

    def __iter__(self):
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)


def read_log(path: str) -> List[Dict[str, Any]]:
    events = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                events.append(json.loads(line))
    return events


def replay(guide: TopicGuide, events: Iterable[Dict[str, Any]]) -> Tuple[InterviewAgenda, Transcript, bool]:
    """Fold an event sequence into (agenda, transcript, ended).

    Replay applies raw field updates (not the guarded mutation methods) so the
    reconstructed state is bit-identical to the live state the events were
    emitted from.
    """
    agenda = InterviewAgenda.for_guide(guide)
    transcript = Transcript()
    ended = False
    for event in events:
        kind = event["kind"]
        if kind == TURN:
            index = event["index"]
            if index == len(transcript.turns) + 1:
                transcript.turns.append(
                    Turn(
                        index=index,
                        question=event["question"],
                        response=event.get("response"),
                        asked_at=event.get("asked_at"),
                        answered_at=event.get("answered_at"),
                        action=event.get("action"),
                    )
                )
            elif 1 <= index <= len(transcript.turns):
                turn = transcript.turns[index - 1]
                turn.question = event["question"]
                turn.response = event.get("response", turn.response)
                turn.asked_at = event.get("asked_at", turn.asked_at)
                turn.answered_at = event.get("answered_at", turn.answered_at)
                turn.action = event.get("action", turn.action)
            else:
                raise ValueError(f"turn event index {index} out of order")
        elif kind == NOTE:
            note = Note.from_dict(event["note"])
            if note.subtopic_id is not None:
                agenda.entries.setdefault(note.subtopic_id, SubtopicEntry()).notes.append(note)
            elif note.topic_id is not None:
                agenda.topic_notes.setdefault(note.topic_id, []).append(note)
            else:
                agenda.session_notes.append(note)
        elif kind == STATUS_CHANGE:
            entry = agenda.entries.setdefault(event["subtopic_id"], SubtopicEntry())
            entry.status = Status(event["status"])
        elif kind == SUMMARY:
            if event["level"] == "subtopic":
                agenda.entries.setdefault(event["id"], SubtopicEntry()).summary = event["summary"]
            else:
                agenda.topic_summaries[event["id"]] = event["summary"]
        elif kind == PLANNER_RESULT:
            agenda.planner_suggestions = event.get("suggestions")
            emergent = event.get("emergent")
            if emergent:
                topic = agenda.guide.find_topic(emergent["parent_topic_id"])
                if topic is None:
                    raise ValueError(f"planner event references unknown topic {emergent}")
                subtopic = Subtopic(
                    id=emergent["id"],
                    description=emergent["description"],
                    parent_topic_id=emergent["parent_topic_id"],
                    origin=Origin.EMERGENT,
                    created_turn=emergent["created_turn"],
                )
                topic.subtopics.append(subtopic)
                agenda.entries.setdefault(subtopic.id, SubtopicEntry())
        elif kind == SESSION_END:
            ended = True
    return agenda, transcript, ended


# ---------------------------------------------------------------------------
# Snapshots


def snapshot_record(agenda: InterviewAgenda, transcript: Transcript) -> str:
    """Byte-stable serialization of a consistent agenda/transcript pair."""
    return canonical_json({"agenda": agenda.to_dict(), "transcript": transcript.to_dict()})


def parse_snapshot(record: str) -> Tuple[InterviewAgenda, Transcript]:
    data = json.loads(record)
    return InterviewAgenda.from_dict(data["agenda"]), Transcript.from_dict(data["transcript"])


def persist_snapshot(agenda: InterviewAgenda, transcript: Transcript, path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(snapshot_record(agenda, transcript))
    except OSError as exc:
        raise IOError(f"failed to persist snapshot to {path}: {exc}") from exc


def load_snapshot(path: str) -> Tuple[InterviewAgenda, Transcript]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_snapshot(fh.read())
