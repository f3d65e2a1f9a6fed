import {
  AgendaSnapshot,
  AgendaSnapshotSchema,
  CreateSessionResponse,
  CreateSessionResponseSchema,
  MessageResponse,
  MessageResponseSchema,
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function detailOf(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") return body.detail;
  } catch {
    // non-JSON error body; fall through to the status line
  }
  return `request failed with status ${response.status}`;
}

/** Thin typed client over the api-service REST endpoints. */
export class ApiClient {
  constructor(
    readonly baseUrl: string,
    readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchFn(this.url(path), init);
    if (!response.ok) {
      throw new ApiError(await detailOf(response), response.status);
    }
    return response.json();
  }

  async createSession(body: Record<string, unknown> = {}): Promise<CreateSessionResponse> {
    const data = await this.request("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return CreateSessionResponseSchema.parse(data);
  }

  async sendMessage(sessionId: string, text: string): Promise<MessageResponse> {
    const data = await this.request(`/sessions/${encodeURIComponent(sessionId)}/messages`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ response: text }),
    });
    return MessageResponseSchema.parse(data);
  }

  async getAgenda(sessionId: string): Promise<AgendaSnapshot> {
    const data = await this.request(`/sessions/${encodeURIComponent(sessionId)}/agenda`);
    return AgendaSnapshotSchema.parse(data);
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetchFn(this.url("/healthz"));
      return response.ok;
    } catch {
      return false;
    }
  }

  eventsUrl(sessionId: string): string {
    return this.url(`/sessions/${encodeURIComponent(sessionId)}/events`);
  }
}
