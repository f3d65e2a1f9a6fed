import { describe, expect, it } from "vitest";
import { SseParser, openEventStream, SseFrame } from "../src/sse";
import type { FetchLike } from "../src/client";

describe("SseParser", () => {
  it("parses a single complete frame", () => {
    const parser = new SseParser();
    expect(parser.push('event: turn\ndata: {"kind": "turn"}\n\n')).toEqual([
      { event: "turn", data: '{"kind": "turn"}' },
    ]);
  });

  it("buffers partial frames across chunks", () => {
    const parser = new SseParser();
    expect(parser.push("event: no")).toEqual([]);
    expect(parser.push("te\ndata: {}")).toEqual([]);
    expect(parser.push("\n\n")).toEqual([{ event: "note", data: "{}" }]);
  });

  it("handles several frames in one chunk", () => {
    const parser = new SseParser();
    const frames = parser.push("event: a\ndata: 1\n\nevent: b\ndata: 2\n\n");
    expect(frames.map((f) => f.event)).toEqual(["a", "b"]);
  });

  it("joins multi-line data fields", () => {
    const parser = new SseParser();
    expect(parser.push("data: one\ndata: two\n\n")).toEqual([
      { event: "message", data: "one\ntwo" },
    ]);
  });

  it("ignores comments and blank keep-alives", () => {
    const parser = new SseParser();
    expect(parser.push(": keep-alive\n\n")).toEqual([]);
  });
});

function streamResponse(frames: string[]): Response {
  const encoder = new TextEncoder();
  const stream = new ReadableStream<Uint8Array>({
    start(controller) {
      for (const frame of frames) controller.enqueue(encoder.encode(frame));
      controller.close();
    },
  });
  return new Response(stream, { status: 200, headers: { "Content-Type": "text/event-stream" } });
}

describe("openEventStream", () => {
  it("dispatches frames and stops at stream_end", async () => {
    const fetchFn: FetchLike = async () =>
      streamResponse([
        "event: turn\ndata: {}\n\n",
        "event: session_end\ndata: {}\n\n",
        "event: stream_end\ndata: {}\n\n",
        "event: after\ndata: {}\n\n",
      ]);
    const seen: SseFrame[] = [];
    let opened = false;
    let ended = false;
    const stream = openEventStream(
      "http://test/sessions/s/events",
      {
        onFrame: (f) => seen.push(f),
        onOpen: () => (opened = true),
        onEnd: () => (ended = true),
      },
      fetchFn,
    );
    await stream.done;
    expect(opened).toBe(true);
    expect(ended).toBe(true);
    expect(seen.map((f) => f.event)).toEqual(["turn", "session_end"]);
  });

  it("reports errors and reconnects until closed", async () => {
    let calls = 0;
    const fetchFn: FetchLike = async () => {
      calls += 1;
      throw new TypeError("fetch failed");
    };
    const errors: unknown[] = [];
    const stream = openEventStream(
      "http://test/sessions/s/events",
      { onError: (e) => errors.push(e) },
      fetchFn,
      async () => undefined, // no real backoff delay in tests
    );
    await stream.done;
    expect(calls).toBeGreaterThan(1);
    expect(errors.length).toBe(calls);
  });
});
