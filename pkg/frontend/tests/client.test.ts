import { describe, expect, it } from "vitest";

import { DEFAULT_BACKOFF, nextDelay, resolveStreamUrl, SocketLike, StreamClient } from "../src/client.js";
import { PanelViewModel } from "../src/viewmodel.js";

class FakeSocket implements SocketLike {
  onopen: (() => void) | null = null;
  onmessage: ((ev: { data: string }) => void) | null = null;
  onclose: (() => void) | null = null;
  onerror: (() => void) | null = null;
  closed = false;
  close(): void {
    this.closed = true;
    this.onclose?.();
  }
}

describe("reconnecting client", () => {
  it("backs off exponentially up to the cap", () => {
    const delays = [0, 1, 2, 3, 4, 5, 6, 7].map((a) => nextDelay(a));
    expect(delays.slice(0, 4)).toEqual([250, 500, 1000, 2000]);
    expect(Math.max(...delays)).toBe(DEFAULT_BACKOFF.maxMs);
  });

  it("reconnects after a drop and resets to the idle guidance view", () => {
    const sockets: FakeSocket[] = [];
    const updates: PanelViewModel[] = [];
    const pending: Array<() => void> = [];
    const client = new StreamClient(
      "ws://engine/stream",
      (vm) => updates.push(vm),
      () => { const s = new FakeSocket(); sockets.push(s); return s; },
      (fn) => pending.push(fn),
    );
    client.start();
    sockets[0].onopen!();
    sockets[0].onmessage!({
      data: JSON.stringify({ v: 1, kind: "state_change", seq: 0,
        payload: { src: "idle", dst: "ready", frame: 1, t: 0, reason: "", serve: null } }),
    });
    expect(client.viewModel.state).toBe("ready");

    sockets[0].onclose!();
    expect(pending).toHaveLength(1);
    pending.pop()!();               // the scheduled reconnect fires
    expect(sockets).toHaveLength(2);
    sockets[1].onopen!();
    expect(client.viewModel.state).toBe("idle"); // fresh view after reconnect
    expect(client.connected).toBe(true);
  });

  it("stops cleanly without scheduling more attempts", () => {
    const sockets: FakeSocket[] = [];
    const pending: Array<() => void> = [];
    const client = new StreamClient(
      "ws://engine/stream", () => {},
      () => { const s = new FakeSocket(); sockets.push(s); return s; },
      (fn) => pending.push(fn),
    );
    client.start();
    client.stop();
    expect(sockets[0].closed).toBe(true);
    expect(pending).toHaveLength(0);
  });
});

describe("stream url resolution", () => {
  it("prefers the engine query parameter", () => {
    expect(resolveStreamUrl("?engine=ws://10.0.0.2:8000", "ignored"))
      .toBe("ws://10.0.0.2:8000/stream");
    expect(resolveStreamUrl("?engine=ws://10.0.0.2:8000/stream", "ignored"))
      .toBe("ws://10.0.0.2:8000/stream");
  });

  it("falls back to the page host", () => {
    expect(resolveStreamUrl("", "localhost:8000")).toBe("ws://localhost:8000/stream");
  });
});
