import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, LiveStream } from "../src/client.js";
import type { WireFrame } from "../src/types.js";
import { FakeSocket, fakeFetch } from "./fakes.js";

describe("ApiClient", () => {
  it("unwraps payloads and surfaces error bodies as ApiError", async () => {
    const client = new ApiClient(
      "http://fake",
      fakeFetch({
        "GET /instances": () => ({
          body: { instances: [{ name: "demo5", dimension: 5, edge_weight_type: "EXPLICIT" }] },
        }),
        "POST /sessions/x/control": () => ({
          status: 409,
          body: { error: "cannot resume from CREATED", status: "CREATED" },
        }),
      }),
    );
    const instances = await client.listInstances();
    expect(instances[0].name).toBe("demo5");
    try {
      await client.control("x", { action: "resume" });
      expect.unreachable("control should have thrown");
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).status).toBe(409);
      expect((err as ApiError).message).toBe("cannot resume from CREATED");
    }
  });

  it("derives the live stream url from the base url", () => {
    const client = new ApiClient("http://host:9", fakeFetch({}));
    expect(client.liveUrl("abc")).toBe("ws://host:9/sessions/abc/live");
  });
});

describe("LiveStream", () => {
  function frame(sequence: number): WireFrame {
    return { kind: "EVENT", session_id: "s", payload: {}, sequence };
  }

  it("delivers frames in order without gap callbacks", () => {
    FakeSocket.reset();
    const seen: number[] = [];
    const gaps: Array<[number, number]> = [];
    const stream = new LiveStream("ws://fake", FakeSocket, {
      onFrame: (f) => seen.push(f.sequence),
      onGap: (expected, got) => gaps.push([expected, got]),
    });
    const sock = FakeSocket.last();
    sock.open();
    sock.emit(frame(0));
    sock.emit(frame(1));
    sock.emit(frame(2));
    expect(seen).toEqual([0, 1, 2]);
    expect(gaps).toEqual([]);
    expect(stream.open).toBe(true);
  });

  it("reports a sequence skip and resynchronizes", () => {
    FakeSocket.reset();
    const seen: number[] = [];
    const gaps: Array<[number, number]> = [];
    new LiveStream("ws://fake", FakeSocket, {
      onFrame: (f) => seen.push(f.sequence),
      onGap: (expected, got) => gaps.push([expected, got]),
    });
    const sock = FakeSocket.last();
    sock.open();
    sock.emit(frame(0));
    sock.emit(frame(3)); // 1 and 2 were lost
    sock.emit(frame(4));
    expect(seen).toEqual([0, 3, 4]);
    expect(gaps).toEqual([[1, 3]]);
  });

  it("refuses to send once closed and reports the close", () => {
    FakeSocket.reset();
    let closed = false;
    const stream = new LiveStream("ws://fake", FakeSocket, {
      onFrame: () => {},
      onClose: () => (closed = true),
    });
    const sock = FakeSocket.last();
    sock.open();
    stream.send({ action: "start" });
    expect(JSON.parse(sock.sent[0])).toEqual({ action: "start" });
    sock.close();
    expect(closed).toBe(true);
    expect(stream.open).toBe(false);
    expect(() => stream.send({ action: "pause" })).toThrow("not open");
  });

  it("resolves whenOpen once the socket is ready", async () => {
    FakeSocket.reset();
    const stream = new LiveStream("ws://fake", FakeSocket, { onFrame: () => {} });
    const pending = stream.whenOpen();
    FakeSocket.last().open();
    await pending;
    expect(stream.open).toBe(true);
  });
});
