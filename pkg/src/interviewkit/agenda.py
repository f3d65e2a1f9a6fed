"""Turn-synchronous agenda maintenance.

After every interviewee response: extract notes, assess whether the current
subtopic is now covered, and if so summarize it (and the parent topic once
all of its subtopics are covered). Judge failures degrade softly: a failed
extraction yields an empty batch, a failed assessment counts as not covered,
and a failed summary falls back to concatenated notes. A live session never
crashes on one bad model call.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from . import prompts
from .gateway import ChatRequest, Gateway, GatewayError, request
from .model import InterviewAgenda, Note, Status, Subtopic, Topic, Transcript

log = logging.getLogger(__name__)


class JudgeUnavailableError(Exception):
    pass


@dataclass
class NoteBatch:
    notes: List[Note] = field(default_factory=list)

    def __iter__(self):
        return iter(self.notes)

    def __len__(self) -> int:
        return len(self.notes)


@dataclass
class CoverageVerdict:
    subtopic_id: str
    covered: bool
    rationale: str
    framework: str  # "STAR" | "Descriptive"


class AgendaManager:
    def __init__(self, gateway: Gateway):
        self.gateway = gateway

    # -- operations

    def extract_notes(
        self, response: str, agenda: InterviewAgenda, transcript: Transcript
    ) -> NoteBatch:
        if not response.strip():
            return NoteBatch()
        source_turn = len(transcript.turns)
        req = request(
            prompts.NOTE_EXTRACTION_SYSTEM,
            prompts.note_extraction_user(agenda, transcript, response),
            temperature=0.2,
            response_schema=prompts.NOTE_EXTRACTION_SCHEMA,
        )
        try:
            data = self.gateway.complete_json(req)
        except GatewayError as exc:
            log.warning("note extraction unavailable, continuing with empty batch: %s", exc)
            return NoteBatch()
        batch = NoteBatch()
        known_subtopics = set(agenda.entries)
        known_topics = {t.id for t in agenda.guide.topics}
        for item in data["notes"]:
            text = item["text"].strip()
            if not text:
                continue
            subtopic_id = item.get("subtopic_id")
            topic_id = item.get("topic_id")
            if subtopic_id is not None and subtopic_id not in known_subtopics:
                # Facts that match no subtopic attach at topic level.
                topic_id, subtopic_id = subtopic_id.split(".")[0], None
            if subtopic_id is None and topic_id is not None and topic_id not in known_topics:
                topic_id = None
            batch.notes.append(
                Note(text=text, source_turn=source_turn, subtopic_id=subtopic_id, topic_id=topic_id)
            )
        return batch

    def assess_coverage(self, subtopic: Subtopic, notes: List[Note]) -> CoverageVerdict:
        if not notes:
            return CoverageVerdict(subtopic.id, False, "no notes yet", "Descriptive")
        req = request(
            prompts.COVERAGE_ASSESSMENT_SYSTEM,
            prompts.coverage_assessment_user(subtopic, [n.text for n in notes]),
            temperature=0.0,
            response_schema=prompts.COVERAGE_ASSESSMENT_SCHEMA,
        )
        try:
            data = self.gateway.complete_json(req)
        except GatewayError as exc:
            log.warning("coverage judge unavailable, defaulting to not covered: %s", exc)
            return CoverageVerdict(subtopic.id, False, "judge unavailable", "Descriptive")
        return CoverageVerdict(
            subtopic_id=subtopic.id,
            covered=bool(data["covered"]),
            rationale=data["rationale"],
            framework=data["framework"],
        )

    def summarize_subtopic(self, subtopic: Subtopic, notes: List[Note]) -> str:
        texts = [n.text for n in notes]
        if len(texts) <= 1:
            return texts[0] if texts else subtopic.description
        req = request(
            prompts.SUBTOPIC_SUMMARY_SYSTEM,
            prompts.coverage_assessment_user(subtopic, texts),
            temperature=0.2,
            response_schema=prompts.SUMMARY_SCHEMA,
        )
        try:
            return self.gateway.complete_json(req)["summary"]
        except GatewayError as exc:
            log.warning("summary judge unavailable, using concatenated notes: %s", exc)
            return " ".join(texts)

    def summarize_topic(self, topic: Topic, subtopic_summaries: List[str]) -> str:
        req = request(
            prompts.TOPIC_SUMMARY_SYSTEM,
            f"TOPIC: {topic.title}\nSUBTOPIC_SUMMARIES:\n"
            + "\n".join(f"- {s}" for s in subtopic_summaries),
            temperature=0.2,
            response_schema=prompts.SUMMARY_SCHEMA,
        )
        try:
            return self.gateway.complete_json(req)["summary"]
        except GatewayError as exc:
            log.warning("topic summary judge unavailable, using concatenation: %s", exc)
            return " ".join(subtopic_summaries)

    # -- per-turn step

    def step(
        self, agenda: InterviewAgenda, transcript: Transcript, response: str
    ) -> List[Dict[str, Any]]:
        """Run the full agenda-manager pass for one completed turn.

        Mutates the agenda in place and returns the events to persist.
        """
        events: List[Dict[str, Any]] = []
        batch = self.extract_notes(response, agenda, transcript)
        for note in batch:
            agenda.add_note(note, len(transcript.turns))
            events.append({"kind": "note", "note": note.to_dict()})

        current_id = agenda.current_in_progress()
        if current_id is None:
            return events
        subtopic = agenda.guide.find_subtopic(current_id)
        entry = agenda.entries[current_id]
        verdict = self.assess_coverage(subtopic, entry.notes)
        if not verdict.covered:
            return events

        summary = self.summarize_subtopic(subtopic, entry.notes)
        agenda.mark_covered(current_id, summary)
        events.append(
            {"kind": "status_change", "subtopic_id": current_id, "status": Status.COVERED.value}
        )
        events.append({"kind": "summary", "level": "subtopic", "id": current_id, "summary": summary})

        topic = agenda.guide.find_topic(subtopic.parent_topic_id)
        if topic is not None and all(
            agenda.entries[s.id].status == Status.COVERED for s in topic.subtopics
        ):
            topic_summary = self.summarize_topic(
                topic, [agenda.entries[s.id].summary or "" for s in topic.subtopics]
            )
            agenda.set_topic_summary(topic.id, topic_summary)
            events.append(
                {"kind": "summary", "level": "topic", "id": topic.id, "summary": topic_summary}
            )
        return events
