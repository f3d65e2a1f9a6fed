import { describe, expect, it } from "vitest";
import { ApiClient, ApiError } from "../src/client";
import { MockInterviewService, downService, goldenAgenda } from "./mock-service";

describe("ApiClient", () => {
  it("creates a session and parses the opener", async () => {
    const service = new MockInterviewService();
    const client = new ApiClient("http://mock.test", service.fetch);
    const created = await client.createSession();
    expect(created.session_id).toBe(service.sessionId);
    expect(created.ended).toBe(false);
    expect(created.message).toContain("avoid sharing personally identifying details");
  });

  it("sends a message and receives the next question", async () => {
    const service = new MockInterviewService();
    const client = new ApiClient("http://mock.test", service.fetch);
    const { session_id } = await client.createSession();
    const reply = await client.sendMessage(session_id, "I trained as a clerk.");
    expect(reply.turn).toBe(1);
    expect(reply.ended).toBe(false);
    expect(service.received).toEqual(["I trained as a clerk."]);
  });

  it("parses the agenda snapshot against the schema", async () => {
    const service = new MockInterviewService();
    const client = new ApiClient("http://mock.test", service.fetch);
    const snapshot = await client.getAgenda(service.sessionId);
    expect(snapshot.phase).toBe("ended");
    expect(Object.keys(snapshot.agenda.entries)).toContain("2.E1");
  });

  it("surfaces server error details with the status code", async () => {
    const service = new MockInterviewService();
    const client = new ApiClient("http://mock.test", service.fetch);
    await expect(client.getAgenda("nope")).rejects.toMatchObject({
      name: "ApiError",
      status: 404,
    });
  });

  it("rejects a malformed server payload", async () => {
    const client = new ApiClient("http://mock.test", async () =>
      new Response(JSON.stringify({ unexpected: true }), { status: 201 }),
    );
    await expect(client.createSession()).rejects.toThrow();
  });

  it("propagates transport failures", async () => {
    const client = new ApiClient("http://mock.test", downService);
    await expect(client.createSession()).rejects.toThrow(TypeError);
    expect(await client.health()).toBe(false);
  });

  it("health reflects a reachable server", async () => {
    const service = new MockInterviewService();
    const client = new ApiClient("http://mock.test", service.fetch);
    expect(await client.health()).toBe(true);
  });

  it("golden fixture itself satisfies the wire schema", () => {
    // Guards against the fixture drifting from the client's expectations.
    expect(goldenAgenda().agenda.guide.topics.length).toBe(2);
  });

  it("ApiError carries the status", () => {
    const error = new ApiError("boom", 409);
    expect(error.status).toBe(409);
    expect(error.message).toBe("boom");
  });
});
