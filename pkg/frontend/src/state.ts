import { ApiClient } from "./client";
import { openEventStream, EventStream } from "./sse";
import {
  AgendaSnapshot,
  ChatMessage,
  ConnectionStatus,
  ConsolePhase,
} from "./types";

export interface ConsoleState {
  phase: ConsolePhase;
  sessionId: string | null;
  messages: ChatMessage[];
  agenda: AgendaSnapshot | null;
  connection: ConnectionStatus;
  /** A create-session request is in flight (guards double-start). */
  starting: boolean;
  /** A send is in flight (at most one outstanding). */
  sending: boolean;
  /** Text of the last failed send, kept for the retry affordance. */
  failedText: string | null;
  error: string | null;
}

export type Listener = (state: ConsoleState) => void;

function initialState(): ConsoleState {
  return {
    phase: "landing",
    sessionId: null,
    messages: [],
    agenda: null,
    connection: "idle",
    starting: false,
    sending: false,
    failedText: null,
    error: null,
  };
}

/**
 * Single source of truth for the console. All transitions go through the
 * methods below; the DOM layer is a pure function of the state.
 */
export class ConsoleStore {
  private state = initialState();
  private listeners = new Set<Listener>();
  private stream: EventStream | null = null;

  constructor(private readonly client: ApiClient) {}

  getState(): ConsoleState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private update(patch: Partial<ConsoleState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Landing → Chatting. No-op while a create request is pending. */
  async startInterview(guideChoice: Record<string, unknown> = {}): Promise<void> {
    if (this.state.phase !== "landing" || this.state.starting) return;
    this.update({ starting: true, error: null });
    try {
      const created = await this.client.createSession(guideChoice);
      this.update({
        phase: "chatting",
        sessionId: created.session_id,
        messages: [{ role: "interviewer", text: created.message, turnIndex: 1 }],
        starting: false,
      });
      this.openStream(created.session_id);
      if (created.ended) await this.enterReview(created.session_id);
    } catch (error) {
      // Stay on Landing with the error inline; the start button re-enables.
      this.update({ starting: false, error: describe(error) });
    }
  }

  /** Append one exchange. Empty input and concurrent sends are rejected. */
  async sendResponse(text: string): Promise<void> {
    const trimmed = text.trim();
    const sessionId = this.state.sessionId;
    if (this.state.phase !== "chatting" || this.state.sending) return;
    if (trimmed === "" || sessionId === null) return;
    const answeredTurn = this.state.messages.length > 0
      ? this.state.messages[this.state.messages.length - 1]!.turnIndex
      : 1;
    // Optimistic participant bubble; the reply lands when the server answers.
    this.update({
      sending: true,
      error: null,
      failedText: null,
      messages: [
        ...this.state.messages,
        { role: "participant", text: trimmed, turnIndex: answeredTurn },
      ],
    });
    try {
      const reply = await this.client.sendMessage(sessionId, trimmed);
      this.update({
        sending: false,
        messages: [
          ...this.state.messages,
          { role: "interviewer", text: reply.message, turnIndex: reply.turn + 1 },
        ],
      });
      if (reply.ended) await this.enterReview(sessionId);
    } catch (error) {
      // Roll back the optimistic bubble so a retry does not duplicate it.
      this.update({
        sending: false,
        messages: this.state.messages.slice(0, -1),
        failedText: trimmed,
        error: describe(error),
      });
    }
  }

  /** Re-send the text whose send last failed, if any. */
  async retryLastSend(): Promise<void> {
    const text = this.state.failedText;
    if (text !== null) await this.sendResponse(text);
  }

  /** Chatting → Review once the server reports the session ended. */
  private async enterReview(sessionId: string): Promise<void> {
    try {
      const snapshot = await this.client.getAgenda(sessionId);
      this.update({ phase: "review", agenda: snapshot });
    } catch (error) {
      this.update({ error: describe(error) });
    }
  }

  private openStream(sessionId: string): void {
    this.update({ connection: "connecting" });
    this.stream = openEventStream(
      this.client.eventsUrl(sessionId),
      {
        onOpen: () => this.update({ connection: "live" }),
        onEnd: () => {
          this.update({ connection: "closed" });
          // End detection: if a session_end arrived while no send was in
          // flight (e.g. server-side cap), move to Review.
          if (this.state.phase === "chatting" && !this.state.sending) {
            void this.enterReview(sessionId);
          }
        },
        onError: () => this.update({ connection: "error" }),
      },
      this.client.fetchFn,
    );
  }

  dispose(): void {
    this.stream?.close();
    this.stream = null;
  }
}

function describe(error: unknown): string {
  if (error instanceof Error) return error.message;
  return String(error);
}
