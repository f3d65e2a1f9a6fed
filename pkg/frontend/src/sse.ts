import type { FetchLike } from "./client";

export interface SseFrame {
  event: string;
  data: string;
}

/**
 * Incremental parser for a text/event-stream body. Feed it decoded chunks in
 * arrival order; it yields complete frames and buffers partial ones.
 */
export class SseParser {
  private buffer = "";

  push(chunk: string): SseFrame[] {
    this.buffer += chunk;
    const frames: SseFrame[] = [];
    let boundary: number;
    while ((boundary = this.buffer.indexOf("\n\n")) !== -1) {
      const raw = this.buffer.slice(0, boundary);
      this.buffer = this.buffer.slice(boundary + 2);
      const frame = parseFrame(raw);
      if (frame !== null) frames.push(frame);
    }
    return frames;
  }
}

function parseFrame(raw: string): SseFrame | null {
  let event = "message";
  const dataLines: string[] = [];
  for (const line of raw.split("\n")) {
    if (line.startsWith("event:")) {
      event = line.slice("event:".length).trim();
    } else if (line.startsWith("data:")) {
      dataLines.push(line.slice("data:".length).trimStart());
    }
    // comments (":") and unknown fields are ignored per the SSE spec
  }
  if (dataLines.length === 0 && event === "message") return null;
  return { event, data: dataLines.join("\n") };
}

export interface StreamHandlers {
  onFrame?: (frame: SseFrame) => void;
  onOpen?: () => void;
  onEnd?: () => void;
  onError?: (error: unknown) => void;
}

export interface EventStream {
  close: () => void;
  done: Promise<void>;
}

const RECONNECT_BASE_MS = 500;
const MAX_RECONNECTS = 5;

/**
 * Open the session event stream. The console uses it only for connection
 * status and end detection: the stream terminates cleanly when the server
 * sends its `stream_end` frame. Transport drops reconnect with backoff.
 */
export function openEventStream(
  url: string,
  handlers: StreamHandlers,
  fetchFn: FetchLike = (input, init) => fetch(input, init),
  sleep: (ms: number) => Promise<void> = (ms) => new Promise((r) => setTimeout(r, ms)),
): EventStream {
  let closed = false;

  const done = (async () => {
    for (let attempt = 0; attempt <= MAX_RECONNECTS && !closed; attempt++) {
      try {
        const response = await fetchFn(url, { headers: { Accept: "text/event-stream" } });
        if (!response.ok || response.body === null) {
          throw new Error(`event stream failed with status ${response.status}`);
        }
        handlers.onOpen?.();
        attempt = 0;
        const reader = response.body.getReader();
        const decoder = new TextDecoder();
        const parser = new SseParser();
        for (;;) {
          const { done: eof, value } = await reader.read();
          if (closed) {
            await reader.cancel().catch(() => undefined);
            return;
          }
          if (eof) break;
          for (const frame of parser.push(decoder.decode(value, { stream: true }))) {
            if (frame.event === "stream_end") {
              handlers.onEnd?.();
              await reader.cancel().catch(() => undefined);
              return;
            }
            handlers.onFrame?.(frame);
          }
        }
        // server closed without stream_end: treat as a drop and reconnect
      } catch (error) {
        if (closed) return;
        handlers.onError?.(error);
      }
      if (!closed) await sleep(RECONNECT_BASE_MS * 2 ** attempt);
    }
  })();

  return {
    close: () => {
      closed = true;
    },
    done,
  };
}
