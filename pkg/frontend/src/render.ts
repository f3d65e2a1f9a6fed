import { AgendaSnapshot, SubtopicEntry, Topic } from "./types";
import { ConsoleState } from "./state";

const INSTRUCTIONS = [
  "The interviewer asks one question per turn; answer in your own words.",
  "There are no right or wrong answers, and you can skip anything.",
  "When the interview ends you will see a summary of what was discussed.",
];

const PII_NOTICE =
  "Please avoid sharing personally identifying details such as your name, " +
  "employer, address, or contact information during this interview.";

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderApp(root: HTMLElement, state: ConsoleState): void {
  root.textContent = "";
  switch (state.phase) {
    case "landing":
      root.appendChild(renderLanding(root.ownerDocument, state));
      break;
    case "chatting":
      root.appendChild(renderChat(root.ownerDocument, state));
      break;
    case "review":
      if (state.agenda !== null) {
        root.appendChild(renderAgenda(root.ownerDocument, state.agenda));
      }
      break;
  }
}

export function renderLanding(doc: Document, state: ConsoleState): HTMLElement {
  const section = el(doc, "section", "landing");
  section.appendChild(el(doc, "h1", "title", "Interview"));
  const list = el(doc, "ul", "instructions");
  for (const line of INSTRUCTIONS) list.appendChild(el(doc, "li", undefined, line));
  section.appendChild(list);
  const notice = el(doc, "p", "pii-notice", PII_NOTICE);
  notice.setAttribute("role", "note");
  section.appendChild(notice);
  if (state.error !== null) {
    const error = el(doc, "p", "error", state.error);
    error.setAttribute("role", "alert");
    section.appendChild(error);
  }
  const start = el(doc, "button", "start-button", state.starting ? "Starting…" : "Start interview");
  start.id = "start";
  start.disabled = state.starting;
  section.appendChild(start);
  return section;
}

export function renderChat(doc: Document, state: ConsoleState): HTMLElement {
  const section = el(doc, "section", "chat");

  const status = el(doc, "p", `connection connection-${state.connection}`, state.connection);
  status.setAttribute("aria-live", "polite");
  section.appendChild(status);

  const list = el(doc, "ol", "messages");
  list.setAttribute("aria-label", "conversation");
  for (const message of state.messages) {
    const item = el(doc, "li", `bubble bubble-${message.role}`, message.text);
    item.setAttribute(
      "aria-label",
      `${message.role === "interviewer" ? "Interviewer" : "You"}, turn ${message.turnIndex}`,
    );
    list.appendChild(item);
  }
  section.appendChild(list);

  if (state.error !== null) {
    const error = el(doc, "p", "error", state.error);
    error.setAttribute("role", "alert");
    const retry = el(doc, "button", "retry-button", "Retry");
    retry.id = "retry";
    error.appendChild(retry);
    section.appendChild(error);
  }

  const form = el(doc, "form", "composer");
  form.id = "composer";
  const input = el(doc, "textarea", "composer-input");
  input.id = "response";
  input.setAttribute("aria-label", "your response");
  input.disabled = state.sending;
  form.appendChild(input);
  const send = el(doc, "button", "send-button", state.sending ? "Sending…" : "Send");
  send.id = "send";
  send.type = "submit";
  send.disabled = state.sending;
  form.appendChild(send);
  section.appendChild(form);
  return section;
}

const STATUS_LABELS: Record<SubtopicEntry["status"], string> = {
  pending: "Pending",
  in_progress: "In progress",
  covered: "Covered",
};

export function renderAgenda(doc: Document, snapshot: AgendaSnapshot): HTMLElement {
  const section = el(doc, "section", "review");
  section.appendChild(el(doc, "h1", "title", "Interview summary"));
  for (const topic of snapshot.agenda.guide.topics) {
    section.appendChild(renderTopic(doc, topic, snapshot));
  }
  return section;
}

function renderTopic(doc: Document, topic: Topic, snapshot: AgendaSnapshot): HTMLElement {
  const block = el(doc, "section", "topic");
  block.dataset.topicId = topic.id;
  block.appendChild(el(doc, "h2", "topic-title", `${topic.id}. ${topic.title}`));
  const topicSummary = snapshot.agenda.topic_summaries[topic.id];
  if (topicSummary !== undefined) {
    block.appendChild(el(doc, "p", "topic-summary", topicSummary));
  }
  const list = el(doc, "ul", "subtopics");
  for (const subtopic of topic.subtopics) {
    const entry = snapshot.agenda.entries[subtopic.id];
    const item = el(doc, "li", "subtopic");
    item.dataset.subtopicId = subtopic.id;
    const status = entry?.status ?? "pending";
    const badge = el(doc, "span", `badge badge-${status}`, STATUS_LABELS[status]);
    item.appendChild(badge);
    if (subtopic.origin === "emergent") {
      item.appendChild(el(doc, "span", "badge badge-emergent", "Emergent"));
    }
    item.appendChild(el(doc, "span", "subtopic-description", subtopic.description));
    // Participants see summaries only — raw notes stay server-side.
    if (entry?.summary != null) {
      item.appendChild(el(doc, "p", "subtopic-summary", entry.summary));
    }
    list.appendChild(item);
  }
  block.appendChild(list);
  return block;
}
