"""Shared domain types: topic guides, transcripts, agendas, weights, profiles.

All types are plain dataclasses with explicit ``to_dict``/``from_dict``
serialization so that snapshots and event logs are byte-stable. Mutation of
the agenda goes through methods that enforce the status lattice
(Pending -> InProgress -> Covered, never backwards) and the single
in-progress-subtopic rule.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional


class Status(str, Enum):
    PENDING = "pending"
    IN_PROGRESS = "in_progress"
    COVERED = "covered"


class Origin(str, Enum):
    PREDEFINED = "predefined"
    EMERGENT = "emergent"


def canonical_json(obj: Any) -> str:
    """Deterministic JSON encoding used for snapshots and equality checks."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# ---------------------------------------------------------------------------
# Topic guide


@dataclass
class Subtopic:
    id: str
    description: str
    parent_topic_id: str
    origin: Origin = Origin.PREDEFINED
    created_turn: Optional[int] = None

    def __post_init__(self) -> None:
        if self.origin == Origin.EMERGENT and self.created_turn is None:
            raise ValueError(f"emergent subtopic {self.id} requires a creation turn")
        if self.origin == Origin.PREDEFINED and self.created_turn is not None:
            raise ValueError(f"predefined subtopic {self.id} must not carry a creation turn")

    def to_dict(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {
            "id": self.id,
            "description": self.description,
            "parent_topic_id": self.parent_topic_id,
            "origin": self.origin.value,
        }
        if self.created_turn is not None:
            d["created_turn"] = self.created_turn
        return d

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "Subtopic":
        return cls(
            id=d["id"],
            description=d["description"],
            parent_topic_id=d["parent_topic_id"],
            origin=Origin(d.get("origin", "predefined")),
            created_turn=d.get("created_turn"),
        )


@dataclass
class Topic:
    id: str
    title: str
    subtopics: List[Subtopic] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "title": self.title,
            "subtopics": [s.to_dict() for s in self.subtopics],
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "Topic":
        return cls(
            id=d["id"],
            title=d["title"],
            subtopics=[Subtopic.from_dict(s) for s in d.get("subtopics", [])],
        )


@dataclass
class TopicGuide:
    topics: List[Topic] = field(default_factory=list)

    def subtopics(self) -> Iterator[Subtopic]:
        for topic in self.topics:
            yield from topic.subtopics

    def subtopic_ids(self) -> List[str]:
        return [s.id for s in self.subtopics()]

    def predefined_subtopics(self) -> List[Subtopic]:
        return [s for s in self.subtopics() if s.origin == Origin.PREDEFINED]

    def find_topic(self, topic_id: str) -> Optional[Topic]:
        for topic in self.topics:
            if topic.id == topic_id:
                return topic
        return None

    def find_subtopic(self, subtopic_id: str) -> Optional[Subtopic]:
        for subtopic in self.subtopics():
            if subtopic.id == subtopic_id:
                return subtopic
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {"topics": [t.to_dict() for t in self.topics]}

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "TopicGuide":
        topics = []
        for ti, td in enumerate(d.get("topics", []), start=1):
            topic_id = str(td.get("id") or ti)
            subtopics = []
            for si, sd in enumerate(td.get("subtopics", []), start=1):
                if isinstance(sd, str):
                    sd = {"description": sd}
                subtopics.append(
                    Subtopic(
                        id=str(sd.get("id") or f"{topic_id}.{si}"),
                        description=sd["description"],
                        parent_topic_id=topic_id,
                        origin=Origin(sd.get("origin", "predefined")),
                        created_turn=sd.get("created_turn"),
                    )
                )
            topics.append(Topic(id=topic_id, title=td["title"], subtopics=subtopics))
        return cls(topics=topics)


@dataclass
class GuideViolation:
    code: str  # DuplicateId | EmptyTopic | OrphanSubtopic
    subject: str
    message: str


class GuideValidationError(ValueError):
    def __init__(self, violations: List[GuideViolation]):
        self.violations = violations
        super().__init__("; ".join(f"{v.code}({v.subject}): {v.message}" for v in violations))


def guide_violations(guide: TopicGuide) -> List[GuideViolation]:
    violations: List[GuideViolation] = []
    if not guide.topics:
        violations.append(GuideViolation("EmptyTopic", "", "guide has no topics"))
    seen_topic_ids: set = set()
    seen_subtopic_ids: set = set()
    for topic in guide.topics:
        if topic.id in seen_topic_ids:
            violations.append(GuideViolation("DuplicateId", topic.id, "duplicate topic id"))
        seen_topic_ids.add(topic.id)
        if not topic.subtopics:
            violations.append(GuideViolation("EmptyTopic", topic.id, "topic has no subtopics"))
        for subtopic in topic.subtopics:
            if subtopic.id in seen_subtopic_ids:
                violations.append(
                    GuideViolation("DuplicateId", subtopic.id, "duplicate subtopic id")
                )
            seen_subtopic_ids.add(subtopic.id)
            if subtopic.parent_topic_id != topic.id or not subtopic.id.startswith(topic.id + "."):
                violations.append(
                    GuideViolation(
                        "OrphanSubtopic",
                        subtopic.id,
                        f"subtopic id not anchored under topic {topic.id}",
                    )
                )
    return violations


def validate_guide(guide: TopicGuide) -> TopicGuide:
    """Return the guide unchanged if valid, else raise with all violations."""
    violations = guide_violations(guide)
    if violations:
        raise GuideValidationError(violations)
    return guide


def load_guide(path: str) -> TopicGuide:
    with open(path, "r", encoding="utf-8") as fh:
        return validate_guide(TopicGuide.from_dict(json.load(fh)))


# ---------------------------------------------------------------------------
# Transcript


@dataclass
class Turn:
    index: int  # 1-based
    question: str
    response: Optional[str] = None
    asked_at: Optional[str] = None
    answered_at: Optional[str] = None
    action: Optional[str] = None

    @property
    def complete(self) -> bool:
        return self.response is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "question": self.question,
            "response": self.response,
            "asked_at": self.asked_at,
            "answered_at": self.answered_at,
            "action": self.action,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "Turn":
        return cls(
            index=d["index"],
            question=d["question"],
            response=d.get("response"),
            asked_at=d.get("asked_at"),
            answered_at=d.get("answered_at"),
            action=d.get("action"),
        )


@dataclass
class Transcript:
    turns: List[Turn] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.turns)

    @property
    def last(self) -> Optional[Turn]:
        return self.turns[-1] if self.turns else None

    def completed_turns(self) -> List[Turn]:
        return [t for t in self.turns if t.complete]

    def append_question(
        self, question: str, action: Optional[str] = None, asked_at: Optional[str] = None
    ) -> Turn:
        if self.turns and not self.turns[-1].complete:
            raise ValueError("previous turn is still awaiting a response")
        turn = Turn(index=len(self.turns) + 1, question=question, action=action, asked_at=asked_at)
        self.turns.append(turn)
        return turn

    def complete_turn(self, response: str, answered_at: Optional[str] = None) -> Turn:
        if not self.turns:
            raise ValueError("no outstanding question")
        turn = self.turns[-1]
        if turn.complete:
            raise ValueError(f"turn {turn.index} already completed")
        turn.response = response
        turn.answered_at = answered_at
        return turn

    def to_dict(self) -> Dict[str, Any]:
        return {"turns": [t.to_dict() for t in self.turns]}

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "Transcript":
        transcript = cls(turns=[Turn.from_dict(t) for t in d.get("turns", [])])
        for i, turn in enumerate(transcript.turns, start=1):
            if turn.index != i:
                raise ValueError("turn indices must be contiguous from 1")
        return transcript


# ---------------------------------------------------------------------------
# Agenda


@dataclass
class Note:
    text: str
    source_turn: int
    subtopic_id: Optional[str] = None
    topic_id: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "text": self.text,
            "source_turn": self.source_turn,
            "subtopic_id": self.subtopic_id,
            "topic_id": self.topic_id,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "Note":
        return cls(
            text=d["text"],
            source_turn=d["source_turn"],
            subtopic_id=d.get("subtopic_id"),
            topic_id=d.get("topic_id"),
        )


@dataclass
class SubtopicEntry:
    status: Status = Status.PENDING
    notes: List[Note] = field(default_factory=list)
    summary: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "notes": [n.to_dict() for n in self.notes],
            "summary": self.summary,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "SubtopicEntry":
        return cls(
            status=Status(d.get("status", "pending")),
            notes=[Note.from_dict(n) for n in d.get("notes", [])],
            summary=d.get("summary"),
        )


class AgendaError(ValueError):
    pass


@dataclass
class InterviewAgenda:
    """Live interview state: per-subtopic status, notes, summaries.

    Owns its copy of the guide so emergent subtopics can be appended to a
    parent topic without mutating the configured guide.
    """

    guide: TopicGuide
    entries: Dict[str, SubtopicEntry] = field(default_factory=dict)
    topic_summaries: Dict[str, str] = field(default_factory=dict)
    topic_notes: Dict[str, List[Note]] = field(default_factory=dict)
    session_notes: List[Note] = field(default_factory=list)
    planner_suggestions: Optional[Dict[str, Any]] = None

    @classmethod
    def for_guide(cls, guide: TopicGuide) -> "InterviewAgenda":
        guide = copy.deepcopy(guide)
        return cls(guide=guide, entries={s.id: SubtopicEntry() for s in guide.subtopics()})

    # -- queries

    def entry(self, subtopic_id: str) -> SubtopicEntry:
        try:
            return self.entries[subtopic_id]
        except KeyError:
            raise AgendaError(f"unknown subtopic {subtopic_id}") from None

    def status(self, subtopic_id: str) -> Status:
        return self.entry(subtopic_id).status

    def current_in_progress(self) -> Optional[str]:
        for sid, entry in self.entries.items():
            if entry.status == Status.IN_PROGRESS:
                return sid
        return None

    def unfinished_ids(self) -> List[str]:
        """Subtopic ids not yet covered, in guide order (emergent included)."""
        return [s.id for s in self.guide.subtopics() if self.entries[s.id].status != Status.COVERED]

    def all_covered(self) -> bool:
        return not self.unfinished_ids()

    def coverage_sum(self) -> float:
        """Live binary coverage over predefined subtopics."""
        return float(
            sum(
                1
                for s in self.guide.predefined_subtopics()
                if self.entries[s.id].status == Status.COVERED
            )
        )

    def emergence_sum(self) -> float:
        """Live binary coverage over emergent subtopics."""
        return float(
            sum(
                1
                for s in self.guide.subtopics()
                if s.origin == Origin.EMERGENT and self.entries[s.id].status == Status.COVERED
            )
        )

    # -- mutation

    def set_in_progress(self, subtopic_id: str) -> None:
        entry = self.entry(subtopic_id)
        if entry.status == Status.COVERED:
            raise AgendaError(f"subtopic {subtopic_id} is already covered")
        current = self.current_in_progress()
        if current is not None and current != subtopic_id:
            # Leaving a subtopic un-covered returns it to Pending; it stays
            # eligible for a later transition.
            self.entries[current].status = Status.PENDING
        entry.status = Status.IN_PROGRESS

    def mark_covered(self, subtopic_id: str, summary: str) -> None:
        entry = self.entry(subtopic_id)
        if entry.status == Status.COVERED:
            raise AgendaError(f"subtopic {subtopic_id} is already covered")
        entry.status = Status.COVERED
        entry.summary = summary

    def set_topic_summary(self, topic_id: str, summary: str) -> None:
        topic = self.guide.find_topic(topic_id)
        if topic is None:
            raise AgendaError(f"unknown topic {topic_id}")
        uncovered = [s.id for s in topic.subtopics if self.entries[s.id].status != Status.COVERED]
        if uncovered:
            raise AgendaError(f"topic {topic_id} has uncovered subtopics: {uncovered}")
        self.topic_summaries[topic_id] = summary

    def add_note(self, note: Note, transcript_len: int) -> None:
        if note.source_turn < 1 or note.source_turn > transcript_len:
            raise AgendaError(f"note references turn {note.source_turn} beyond transcript")
        if note.subtopic_id is not None:
            self.entry(note.subtopic_id).notes.append(note)
        elif note.topic_id is not None:
            if self.guide.find_topic(note.topic_id) is None:
                raise AgendaError(f"unknown topic {note.topic_id}")
            self.topic_notes.setdefault(note.topic_id, []).append(note)
        else:
            # Untargeted notes come from baseline strategies that keep no
            # per-subtopic cursor; they still feed post-hoc evaluation.
            self.session_notes.append(note)

    def all_notes(self) -> List[Note]:
        notes: List[Note] = []
        for subtopic in self.guide.subtopics():
            notes.extend(self.entries[subtopic.id].notes)
        for topic in self.guide.topics:
            notes.extend(self.topic_notes.get(topic.id, []))
        notes.extend(self.session_notes)
        return notes

    def add_emergent(
        self, description: str, parent_topic_id: str, created_turn: int
    ) -> Subtopic:
        topic = self.guide.find_topic(parent_topic_id)
        if topic is None:
            raise AgendaError(f"unknown parent topic {parent_topic_id}")
        n = 1 + sum(1 for s in topic.subtopics if s.origin == Origin.EMERGENT)
        subtopic = Subtopic(
            id=f"{parent_topic_id}.E{n}",
            description=description,
            parent_topic_id=parent_topic_id,
            origin=Origin.EMERGENT,
            created_turn=created_turn,
        )
        topic.subtopics.append(subtopic)
        self.entries[subtopic.id] = SubtopicEntry()
        return subtopic

    # -- serialization

    def to_dict(self) -> Dict[str, Any]:
        return {
            "guide": self.guide.to_dict(),
            "entries": {sid: entry.to_dict() for sid, entry in sorted(self.entries.items())},
            "topic_summaries": dict(sorted(self.topic_summaries.items())),
            "topic_notes": {
                tid: [n.to_dict() for n in notes]
                for tid, notes in sorted(self.topic_notes.items())
            },
            "session_notes": [n.to_dict() for n in self.session_notes],
            "planner_suggestions": self.planner_suggestions,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "InterviewAgenda":
        return cls(
            guide=TopicGuide.from_dict(d["guide"]),
            entries={sid: SubtopicEntry.from_dict(e) for sid, e in d.get("entries", {}).items()},
            topic_summaries=dict(d.get("topic_summaries", {})),
            topic_notes={
                tid: [Note.from_dict(n) for n in notes]
                for tid, notes in d.get("topic_notes", {}).items()
            },
            session_notes=[Note.from_dict(n) for n in d.get("session_notes", [])],
            planner_suggestions=d.get("planner_suggestions"),
        )


# ---------------------------------------------------------------------------
# Utility weights


@dataclass(frozen=True)
class UtilityWeights:
    alpha: float
    beta: float
    gamma: float
    free_turns: int = 0
    per_turn_cost: float = 1.0

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma", "per_turn_cost"):
            value = getattr(self, name)
            if not (value >= 0 and value == value and value != float("inf")):
                raise ValueError(f"{name} must be finite and nonnegative")
        if self.free_turns < 0:
            raise ValueError("free_turns must be nonnegative")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "free_turns": self.free_turns,
            "per_turn_cost": self.per_turn_cost,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "UtilityWeights":
        return cls(
            alpha=d["alpha"],
            beta=d["beta"],
            gamma=d["gamma"],
            free_turns=d.get("free_turns", 0),
            per_turn_cost=d.get("per_turn_cost", 1.0),
        )


def planner_weights() -> UtilityWeights:
    """Weights used inside the planner: unit weights, every turn costs 1."""
    return UtilityWeights(alpha=1.0, beta=1.0, gamma=1.0, free_turns=0, per_turn_cost=1.0)


def evaluation_weights(num_subtopics: int, num_topics: int) -> UtilityWeights:
    """Post-hoc evaluation weights: alpha = 1/|S|, beta = 1/(1.5|S|),
    gamma = 2/|S|, with a cost grace period equal to the topic count."""
    if num_subtopics < 1:
        raise ValueError("guide must have at least one subtopic")
    return UtilityWeights(
        alpha=1.0 / num_subtopics,
        beta=1.0 / (1.5 * num_subtopics),
        gamma=2.0 / num_subtopics,
        free_turns=num_topics,
        per_turn_cost=1.0,
    )


# ---------------------------------------------------------------------------
# User profiles


@dataclass
class ProfileSection:
    subtopic_id: str
    description: str
    facts: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subtopic_id": self.subtopic_id,
            "description": self.description,
            "facts": list(self.facts),
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "ProfileSection":
        return cls(
            subtopic_id=d["subtopic_id"],
            description=d.get("description", ""),
            facts=list(d.get("facts", [])),
        )


@dataclass
class UserProfile:
    profile_id: str
    sections: List[ProfileSection] = field(default_factory=list)
    session_history: Optional[str] = None

    def section_for(self, subtopic_id: str) -> Optional[ProfileSection]:
        for section in self.sections:
            if section.subtopic_id == subtopic_id:
                return section
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "profile_id": self.profile_id,
            "sections": [s.to_dict() for s in self.sections],
            "session_history": self.session_history,
        }

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "UserProfile":
        return cls(
            profile_id=d["profile_id"],
            sections=[ProfileSection.from_dict(s) for s in d.get("sections", [])],
            session_history=d.get("session_history"),
        )


def profile_warnings(profile: UserProfile, guide: TopicGuide) -> List[str]:
    """Non-fatal validation of a profile against its companion guide."""
    known = set(guide.subtopic_ids())
    return [
        f"profile {profile.profile_id}: section references unknown subtopic {s.subtopic_id}"
        for s in profile.sections
        if s.subtopic_id not in known
    ]
