"""Prompt templates and output schemas for every model call.

Every internal request carries a stable ``TASK: <name>`` header as the first
line of its system prompt, and structured context fields rendered as
``FIELD: value`` lines. Both the scripted mock backends and the tests key on
these markers, so changing them is a breaking change for fixtures.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional

from .model import InterviewAgenda, Status, Subtopic, Transcript, UserProfile

# ---------------------------------------------------------------------------
# Output schemas (JSON Schema), one per structured task

LIKERT_5 = {"type": "integer", "minimum": 1, "maximum": 5}

NOTE_EXTRACTION_SCHEMA = {
    "type": "object",
    "properties": {
        "notes": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "subtopic_id": {"type": ["string", "null"]},
                    "topic_id": {"type": ["string", "null"]},
                    "text": {"type": "string", "minLength": 1},
                },
                "required": ["text"],
            },
        }
    },
    "required": ["notes"],
}

COVERAGE_ASSESSMENT_SCHEMA = {
    "type": "object",
    "properties": {
        "covered": {"type": "boolean"},
        "framework": {"enum": ["STAR", "Descriptive"]},
        "rationale": {"type": "string"},
    },
    "required": ["covered", "framework", "rationale"],
}

SUMMARY_SCHEMA = {
    "type": "object",
    "properties": {"summary": {"type": "string", "minLength": 1}},
    "required": ["summary"],
}

ROLLOUT_EMERGENCE_SCHEMA = {
    "type": "object",
    "properties": {
        "emergence": {"type": "integer", "minimum": 0, "maximum": 2},
        "rationale": {"type": "string"},
    },
    "required": ["emergence"],
}

EMERGENT_BRAINSTORM_SCHEMA = {
    "type": "object",
    "properties": {
        "candidate": {
            "type": ["object", "null"],
            "properties": {
                "description": {"type": "string", "minLength": 1},
                "parent_topic_id": {"type": "string"},
                "rationale": {"type": "string"},
            },
            "required": ["description", "parent_topic_id", "rationale"],
        }
    },
    "required": ["candidate"],
}

EVAL_COVERAGE_SCHEMA = {
    "type": "object",
    "properties": {"score": LIKERT_5},
    "required": ["score"],
}

EMERGENT_ITEM_SCHEMA = {
    "type": "object",
    "properties": {
        "emergent_subtopic": {"type": "string", "minLength": 1},
        "topic": {"type": "string"},
        "rationale": {"type": "string"},
    },
    "required": ["emergent_subtopic", "topic", "rationale"],
}

EVAL_EMERGENT_IDENTIFY_SCHEMA = {"type": "array", "items": EMERGENT_ITEM_SCHEMA}

COVERED_ITEM_SCHEMA = {
    "type": "object",
    "properties": {
        "subtopic_covered": {"type": "string", "minLength": 1},
        "rationale": {"type": "string"},
    },
    "required": ["subtopic_covered", "rationale"],
}

EVAL_COVERED_LIST_SCHEMA = {"type": "array", "items": COVERED_ITEM_SCHEMA}

EVAL_COHERENCE_SCHEMA = {
    "type": "object",
    "properties": {
        "local_coherence": LIKERT_5,
        "transition_quality": LIKERT_5,
        "contingent_responsiveness": LIKERT_5,
        "brief_rationale": {"type": "string"},
    },
    "required": ["local_coherence", "transition_quality", "contingent_responsiveness"],
}

EVAL_LEADING_SCHEMA = {
    "type": "object",
    "properties": {
        "score": {"type": "integer", "minimum": 1, "maximum": 3},
        "rationale": {"type": "string"},
    },
    "required": ["score"],
}

ROLEPLAY_SCHEMA = {
    "type": "object",
    "properties": {
        "assistant_message": {"type": "string", "minLength": 1},
        "satisfied": {"type": "boolean"},
        "decision": {"enum": ["ask_next", "reask"]},
        "reason": {"type": "string"},
        "question_to_ask": {"type": "string"},
        "notes": {"type": "string"},
    },
    "required": ["assistant_message", "satisfied", "decision", "notes"],
}

INTERVIEWGPT_SCHEMA = {
    "type": "object",
    "properties": {
        "assistant_message": {"type": "string", "minLength": 1},
        "notes": {"type": "string"},
    },
    "required": ["assistant_message", "notes"],
}

MIMITALK_INTERVIEWER_SCHEMA = {
    "type": "object",
    "properties": {
        "question_to_ask": {"type": "string", "minLength": 1},
        "notes": {"type": "string"},
    },
    "required": ["question_to_ask", "notes"],
}


# ---------------------------------------------------------------------------
# Context renderers


def render_transcript(transcript: Transcript, window: Optional[int] = None) -> str:
    turns = transcript.turns[-window:] if window else transcript.turns
    lines = []
    for turn in turns:
        lines.append(f"[turn {turn.index}] Interviewer: {turn.question}")
        if turn.response is not None:
            lines.append(f"[turn {turn.index}] UserAgent: {turn.response}")
    return "\n".join(lines) if lines else "(no turns yet)"


def render_guide_outline(agenda: InterviewAgenda, with_status: bool = True) -> str:
    lines = []
    for topic in agenda.guide.topics:
        lines.append(f"TOPIC {topic.id}: {topic.title}")
        for subtopic in topic.subtopics:
            status = f" [{agenda.entries[subtopic.id].status.value}]" if with_status else ""
            tag = " (emergent)" if subtopic.origin.value == "emergent" else ""
            lines.append(f"  SUBTOPIC {subtopic.id}: {subtopic.description}{status}{tag}")
    return "\n".join(lines)


def render_agenda_context(agenda: InterviewAgenda) -> str:
    """Agenda as prompt context: summaries replace raw notes once covered."""
    lines = []
    for topic in agenda.guide.topics:
        lines.append(f"TOPIC {topic.id}: {topic.title}")
        if topic.id in agenda.topic_summaries:
            lines.append(f"  TOPIC_SUMMARY: {agenda.topic_summaries[topic.id]}")
            continue
        for subtopic in topic.subtopics:
            entry = agenda.entries[subtopic.id]
            lines.append(
                f"  SUBTOPIC {subtopic.id} [{entry.status.value}]: {subtopic.description}"
            )
            if entry.status == Status.COVERED:
                if entry.summary:
                    lines.append(f"    SUMMARY: {entry.summary}")
            else:
                for note in entry.notes:
                    lines.append(f"    NOTE (turn {note.source_turn}): {note.text}")
        for note in agenda.topic_notes.get(topic.id, []):
            lines.append(f"  TOPIC_NOTE (turn {note.source_turn}): {note.text}")
    return "\n".join(lines)


def render_profile(profile: UserProfile) -> str:
    lines = []
    for section in profile.sections:
        lines.append(f"Subtopic ID: {section.subtopic_id}")
        lines.append(f"Subtopic Description: {section.description}")
        lines.append("Notes:")
        for fact in section.facts:
            lines.append(f"- {fact}")
        lines.append("")
    return "\n".join(lines).strip()


# ---------------------------------------------------------------------------
# Agenda-manager prompts

NOTE_EXTRACTION_SYSTEM = """TASK: note_extraction
You are a session scribe assisting an interviewer. From the interviewee's
latest response, extract salient factual details, explanations, and insights,
and associate each with the most relevant subtopic id from the agenda. A fact
that clearly relates to a topic but matches no subtopic should carry a
topic_id instead of a subtopic_id. Pleasantries and content-free remarks
produce no notes. Each note is one concise third-person sentence.
Output JSON: {"notes": [{"subtopic_id": <id or null>, "topic_id": <id or null>, "text": <string>}]}"""


def note_extraction_user(agenda: InterviewAgenda, transcript: Transcript, response: str) -> str:
    current = agenda.current_in_progress() or "(none)"
    return (
        f"AGENDA:\n{render_guide_outline(agenda)}\n\n"
        f"CURRENT_SUBTOPIC_ID: {current}\n\n"
        f"RECENT_TRANSCRIPT:\n{render_transcript(transcript, window=6)}\n\n"
        f"LATEST_RESPONSE: {response}\n"
    )


COVERAGE_ASSESSMENT_SYSTEM = """TASK: coverage_assessment
Decide whether the subtopic below is covered by the accumulated notes.

Process:
1. Determine subtopic nature:
   - STAR-appropriate: it describes an event, project, or experience
     involving actions, challenges, or outcomes.
   - Descriptive: it focuses on background, motivation, interest, reasoning,
     or conceptual understanding rather than a specific event.
2. Evaluate completeness:
   - STAR-appropriate subtopics require the STAR components:
     Situation (context or background), Task (objective or responsibility),
     Action (steps taken or reasoning), Result (outcome, metric, or
     reflection). Fully covered when almost all components are clearly
     present and coherent.
   - Descriptive subtopics require comprehensive factual, reflective, or
     conceptual detail: fully covered when the main theme is explained with
     sufficient clarity, logic, and completeness.
   - In either case, if the notes are already comprehensive, mark the
     subtopic covered so the interview can move on.
Output JSON: {"covered": <bool>, "framework": "STAR" | "Descriptive", "rationale": <string>}"""


def coverage_assessment_user(subtopic: Subtopic, notes: List[str]) -> str:
    rendered = "\n".join(f"- {n}" for n in notes) if notes else "(no notes)"
    return (
        f"SUBTOPIC_ID: {subtopic.id}\n"
        f"SUBTOPIC_DESCRIPTION: {subtopic.description}\n\n"
        f"NOTES:\n{rendered}\n"
    )


SUBTOPIC_SUMMARY_SYSTEM = """TASK: subtopic_summary
Synthesize the notes for a covered subtopic into a coherent, concise summary
of at most 3 sentences. Integrate, do not repeat or rephrase note by note.
Output JSON: {"summary": <string>}"""

TOPIC_SUMMARY_SYSTEM = """TASK: topic_summary
All subtopics of this topic are covered. Condense their summaries into a
single topic-level summary of at most 4 sentences.
Output JSON: {"summary": <string>}"""


# ---------------------------------------------------------------------------
# Interviewer prompts

QUESTION_GENERATION_SYSTEM = """TASK: question_generation
You are a professional semi-structured interviewer. Produce exactly ONE
natural, conversational question for the given action and target subtopic.
Rules:
- Ask exactly one question; end with a question mark.
- Paraphrase the subtopic into a question; never output the subtopic
  description verbatim.
- When probing or exploring, ground the question in the interviewee's prior
  responses, quoting or referencing what they said.
- Keep the question clear, neutral, and non-leading: do not introduce new
  content, embed presuppositions, or evaluate the prior answer.
Output the question text only."""


def question_generation_user(
    action_kind: str,
    subtopic: Optional[Subtopic],
    agenda: InterviewAgenda,
    transcript: Transcript,
) -> str:
    target = (
        f"TARGET_SUBTOPIC_ID: {subtopic.id}\nTARGET_SUBTOPIC: {subtopic.description}"
        if subtopic
        else "TARGET_SUBTOPIC_ID: (none)"
    )
    return (
        f"ACTION: {action_kind}\n{target}\n\n"
        f"AGENDA:\n{render_agenda_context(agenda)}\n\n"
        f"RECENT_TRANSCRIPT:\n{render_transcript(transcript, window=6)}\n"
    )


# ---------------------------------------------------------------------------
# Planner prompts

ROLLOUT_QUESTION_SYSTEM = """TASK: rollout_question
You are planning ahead in an interview. Propose the single next question the
interviewer could ask, given the context and simulated exchanges so far.
Favor directions with the highest expected gain: uncovered subtopics and
promising emergent threads. Output the question text only."""

ROLLOUT_RESPONSE_SYSTEM = """TASK: rollout_response
You are simulating a plausible interviewee. Given the interview context and
the hypothetical question, produce a plausible 1-2 sentence answer consistent
with everything the interviewee has said so far. Output the answer only."""

ROLLOUT_EMERGENCE_SYSTEM = """TASK: rollout_emergence
Rate the emergence value of the simulated exchanges: does the hypothetical
interviewee content introduce material relevant to the core topics but
outside every existing subtopic?
0 = none, 1 = minor emergent content, 2 = strong emergent content.
Output JSON: {"emergence": 0 | 1 | 2, "rationale": <string>}"""

EMERGENT_BRAINSTORM_SYSTEM = """TASK: emergent_brainstorm
Decide whether to add ONE new emergent subtopic to the interview agenda.

Decision rules (apply strictly):
- The idea must fall within one of the existing topics and not relate to any
  existing subtopic. If it does not clearly map to a parent topic, do NOT
  add it.
- The idea must be novel: emergence is RARE, so if it can reasonably be
  addressed within any existing subtopic (even loosely), do NOT add it.
- The idea must enable new probing that goes beyond deepening existing
  subtopics: a qualitatively different line of inquiry.
- If multiple candidates appear, select only the strongest single candidate.
- If no candidate satisfies all rules, do not add any new subtopic.

NOT emergent: additional examples, edge cases, elaborations, narrow
refinements, clarifications, or rephrasings of existing subtopics.

The description must be short and clear (5-10 words, one sentence maximum).
Output JSON: {"candidate": null} or
{"candidate": {"description": <string>, "parent_topic_id": <id>, "rationale": <string>}}"""


# ---------------------------------------------------------------------------
# Simulator prompt

SIMULATOR_SYSTEM = """TASK: simulator_response
You are playing the role of a real person being interviewed. Respond
naturally, in character, to the interviewer's last question.
If this is the first turn, you should only say that you are happy to start
the interview.

Rules:
- Always answer the question asked; answer only what is necessary.
- Answer length: 1-2 sentences, revealing about one concrete fact.
- Ground every biographical claim in the profile; do not invent life events,
  credentials, dates, or timeline facts.
- If the question is vague or ambiguous, briefly acknowledge the ambiguity
  and either ask one short clarification question OR state one reasonable
  assumption and answer under it, not both.
- You may add at most one emergent insight per answer (an interpretation,
  opinion, or non-obvious takeaway), reflective rather than biographical.
- Stop immediately after your main point; no summaries or closing remarks."""


def simulator_user(profile: UserProfile, transcript: Transcript, question: str) -> str:
    history = profile.session_history or "(none)"
    return (
        f"PROFILE:\n{render_profile(profile)}\n\n"
        f"SESSION_HISTORY: {history}\n\n"
        f"CHAT_HISTORY:\n{render_transcript(transcript)}\n\n"
        f"QUESTION: {question}\n"
    )


# ---------------------------------------------------------------------------
# Evaluation prompts

EVAL_COVERAGE_SYSTEM = """TASK: eval_coverage
Your task is to evaluate recall accuracy in interview notes. Check whether
the ground truth facts appear explicitly in the interview notes.

Rules:
1. Facts must be stated explicitly (no inference).
2. Components of a fact may be spread across the notes.
3. Extra information does not affect the score.

Rubric:
- 5 (Perfect): All ground truth facts are explicitly found in the notes.
- 4 (Minor Omission): One minor fact or sub-bullet is missing.
- 3 (Partial): About half of the facts are found.
- 2 (Vague Overlap): General topic mentioned, specifics missing.
- 1 (No Recall): Ground truth facts are absent.

Output JSON: {"score": 1-5}"""


def eval_coverage_user(ground_truth: str, notes: str) -> str:
    return f"GROUND_TRUTH_FACTS:\n{ground_truth}\n\nINTERVIEW_NOTES:\n{notes}\n"


EVAL_EMERGENT_IDENTIFY_SYSTEM = """TASK: eval_emergent_identify
Identify emergent subtopics in an LLM-led interview: NEW subtopics that
should have been added to the agenda. Emergence is rare; most interviews
produce no new subtopics.

A candidate qualifies ONLY if ALL hold:
1. It clearly falls within an existing interview topic.
2. It does NOT belong to ANY existing subtopic under that topic; if it can
   reasonably be addressed (even loosely) within an existing subtopic, it is
   NOT emergent.
3. It enables a qualitatively new line of inquiry, not just deeper
   questioning of an existing subtopic.
4. It reveals a new dimension, pattern, tradeoff, cross-cutting constraint,
   mental model, latent strategy, failure mode, or decision criterion.

Fluent elaborations, clarifications, examples, or refinements of existing
subtopics are NOT emergent.

If there is no emergent subtopic, return an EMPTY LIST.
Output JSON: [{"emergent_subtopic": <string>, "topic": <string>, "rationale": <string>}]"""


def eval_emergent_identify_user(guide_outline: str, ground_truth: str, notes: str) -> str:
    return (
        f"TOPIC_GUIDE:\n{guide_outline}\n\n"
        f"GROUND_TRUTH_FACTS:\n{ground_truth}\n\n"
        f"INTERVIEW_NOTES:\n{notes}\n"
    )


EVAL_EMERGENT_COVERAGE_SYSTEM = """TASK: eval_emergent_coverage
You are a session scribe. For each listed emergent subtopic, determine
whether the interview notes fully cover it.
1. Infer whether the subtopic is STAR-appropriate (a specific event, project,
   or experience with actions, challenges, or outcomes) or Descriptive
   (background, motivation, reasoning, conceptual understanding).
2. STAR-appropriate: fully covered when almost all of Situation, Task,
   Action, Result are clearly present. Descriptive: fully covered when the
   theme is explained with comprehensive factual, reflective, or conceptual
   detail.
Return only the fully covered subtopics. If none is covered, return [].
Output JSON: [{"subtopic_covered": <string>, "rationale": <string>}]"""


def eval_emergent_coverage_user(subtopics: List[str], notes: str) -> str:
    listing = "\n".join(f"- {s}" for s in subtopics)
    return f"SUBTOPICS:\n{listing}\n\nINTERVIEW_NOTES:\n{notes}\n"


EVAL_DEDUP_SYSTEM = """TASK: eval_dedup
Your ONLY task is to deduplicate covered subtopics. Two subtopics are
semantic duplicates if they refer to the same underlying concept, skill,
experience, system, or question; would be answered by the same explanation;
and differ only in wording, emphasis, or phrasing.
Example duplicates: "Team leadership experience" = "Leading teams".

For each duplicate group, keep ONE canonical subtopic (the most concise,
general phrasing) and merge the rationales without introducing new claims.
Each subtopic must appear at most once. If the input list is empty, return
an EMPTY LIST.
Output JSON: [{"subtopic_covered": <string>, "rationale": <string>}]"""


def eval_dedup_user(items: List[Dict[str, Any]]) -> str:
    lines = [f"- {it['subtopic_covered']}: {it.get('rationale', '')}" for it in items]
    return "COVERED_SUBTOPICS:\n" + ("\n".join(lines) if lines else "(empty)") + "\n"


EVAL_COHERENCE_SYSTEM = """TASK: eval_coherence
You will be given the full transcript of a semi-structured interview.
Assign one holistic integer score from 1 (very poor) to 5 (excellent) per
dimension. Do not score individual turns.

A. Local coherence between consecutive questions: are successive questions
   logically connected to the immediately preceding context?
B. Transition quality across topics: are topic shifts signposted and smooth
   rather than abrupt and disruptive?
C. Contingent responsiveness of follow-ups: are follow-up questions grounded
   in the interviewee's prior responses rather than unwarranted assumptions?

Output JSON: {"local_coherence": 1-5, "transition_quality": 1-5,
"contingent_responsiveness": 1-5, "brief_rationale": <string>}"""

EVAL_LEADING_SYSTEM = """TASK: eval_leading
You will be given an interview transcript and one interviewer question.
A leading question introduces new content, embeds presuppositions, or
evaluates the interviewee's response, steering their answer.

Cleanness rubric (collapsed to three tiers):
1 = Strongly leading: the question clearly introduces content,
    presupposition, or evaluation suggesting a specific answer.
2 = Mildly leading: some new content or evaluative framing suggests a
    direction, but authorship of the answer is not compromised.
3 = Contextually clean or cleaner: the question stays within the
    interviewee's framing, repeats or logically extends their own content,
    or introduces nothing beyond the question itself.

Output JSON: {"score": 1-3, "rationale": <string>}"""


def eval_leading_user(transcript: Transcript, question: str) -> str:
    return f"TRANSCRIPT:\n{render_transcript(transcript)}\n\nQUESTION_TO_EVALUATE: {question}\n"


# ---------------------------------------------------------------------------
# Baseline prompts

ROLEPLAY_SYSTEM = """TASK: baseline_roleplay
You are an AI interviewer designed to collect detailed and structured
information about a candidate's professional background. Be polite and
affable in tone while formal in approach.

You must:
- Ask exactly ONE question per turn.
- Paraphrase the given subtopic into a single natural, conversational
  question. DO NOT exactly output the original subtopic.
- Rephrase or re-ask when the response lacks specificity (missing time
  periods, tasks, tools, or metrics); decide "reask" in that case, otherwise
  "ask_next".
- Generate brief, structured third-person notes (1-2 sentences) capturing
  key info from the user's last response, including previous notes.

Your output must be a valid JSON object:
{"assistant_message": <next question, paraphrased, one question only>,
 "satisfied": true | false,
 "decision": "ask_next" | "reask",
 "reason": <brief reason>,
 "question_to_ask": <the question>,
 "notes": <structured notes>}
Do not include code fences, commentary, or text outside this JSON."""

INTERVIEWGPT_SYSTEM = """TASK: baseline_interviewgpt
You are a survey interviewer named 'InterviewGPT', an AI interviewer wanting
to find out more about people's views around AI in the workforce. You conduct
qualitative research professionally: non-biased, non-partisan questions that
elicit rich responses.

Guidelines:
- Ask one question at a time; never overload the interviewee.
- Do not guide or predetermine answers; no associations or suggestions.
- Ask neutral follow-up questions when answers are short, surprising, or
  unclear ("Why is that?", "Could you expand on that?").
- Strictly paraphrase subtopics from the outline; never copy a subtopic
  directly into your question.
- Generate brief, structured third-person notes (1-2 sentences) capturing
  key info from the last response, including previous notes.

Your output must be a valid JSON object:
{"assistant_message": <the question to ask>, "notes": <structured notes>}
Do not include code fences, commentary, or text outside this JSON."""

MIMITALK_INTERVIEWER_SYSTEM = """TASK: baseline_mimitalk_interviewer
You are a professional AI interviewer conducting an in-depth, conversational
interview. Based on the conversation history and the supervisor's strategic
guidance: decide what topic/subtopic to explore next, whether to probe deeper
or transition, ask exactly ONE question per turn, paraphrase subtopics into
conversational questions (never verbatim), and build on prior answers.
Also produce structured third-person notes (1-2 sentences) from the user's
last response.

Output (strict JSON only):
{"question_to_ask": <your next question>, "notes": <structured notes>}"""

MIMITALK_SUPERVISOR_SYSTEM = """TASK: baseline_mimitalk_supervisor
You are an AI interview supervision expert analyzing interview quality and
providing strategic guidance. Analyze the conversation history against the
full interview guide and report: which topics/subtopics are covered
adequately, whether to probe deeper or transition, quality of information so
far, suggested angles or follow-ups, and coverage gaps. The interviewer AI
decides the next question; your role is strategic guidance only.
Output the guidance as plain text."""
