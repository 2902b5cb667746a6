import { describe, expect, it, vi } from "vitest";

import { FeedbackPayload, GuidancePayload, StreamMessage } from "../src/messages.js";
import { initialViewModel, needleFraction, projectMessage } from "../src/viewmodel.js";

function msg(kind: string, payload: unknown, v = 1): StreamMessage {
  return { v, kind, seq: 0, payload };
}

function judged(value: number, mean: number, sd: number, status: "pass" | "fail",
                direction: "increase" | "decrease" | "none" = "none") {
  return { value, mean, sd, status, direction };
}

function feedbackPayload(overrides: Partial<FeedbackPayload["report"]> = {}): FeedbackPayload {
  return {
    serve: { session: "s", index: 1 },
    label: "valid",
    report: {
      pitch: judged(21.6, 21.6, 7.95, "pass"),
      speed: judged(5.41, 5.41, 0.41, "pass"),
      height_trace: [[0, 0.05, true], [0.05, 0.11, true]],
      wrist: judged(9.96, 9.96, 3.93, "pass"),
      elbow: judged(4.97, 4.97, 0.96, "pass"),
      shoulder: judged(1.48, 1.48, 0.87, "pass"),
      wrist_upper_bound_deg: 9.96,
      ...overrides,
    },
  };
}

function guidancePayload(overrides: Partial<GuidancePayload> = {}): GuidancePayload {
  return {
    t: 0,
    state: "idle",
    shuttle_target: [0.18, 1.05, 0.2],
    racket_target: [0.3, 1.05, 0.2],
    sagittal: [0, 0, 1],
    halo_shuttle: "green",
    halo_racket: "green",
    track: null,
    ...overrides,
  };
}

describe("projectMessage examples", () => {
  it("pitch fail with decrease direction turns the widget red with a lowering arrow", () => {
    const payload = feedbackPayload({ pitch: judged(30.0, 21.6, 7.95, "fail", "decrease") });
    const vm = projectMessage(msg("feedback", payload), initialViewModel());
    expect(vm.pitchWidget?.color).toBe("red");
    expect(vm.pitchWidget?.arrow).toBe(true);
    expect(vm.pitchWidget?.arrowTowardSmaller).toBe(true);
  });

  it("speed at the model mean puts the needle exactly at dial center", () => {
    const vm = projectMessage(msg("feedback", feedbackPayload()), initialViewModel());
    expect(vm.speedometer?.needleFraction).toBe(0.5);
  });

  it("zero sagittal distance shows a green halo", () => {
    // the engine judged the distance and sent green; the client echoes it
    const vm = projectMessage(msg("guidance", guidancePayload()), initialViewModel());
    expect(vm.ready.haloRacket).toBe("green");
    expect(vm.ready.haloShuttle).toBe("green");
  });

  it("frame messages move the avatar points only", () => {
    const payload = { t: 0.1, complete: true, points: { wrist: [0.1, 1.2, 0.0] } };
    const prior = initialViewModel();
    const vm = projectMessage(msg("frame", payload), prior);
    expect(vm.avatar.wrist).toEqual([0.1, 1.2, 0.0]);
    expect(vm.pitchWidget).toBeNull();
  });

  it("unknown kinds are ignored with a console notice", () => {
    const notices: string[] = [];
    const prior = initialViewModel();
    const vm = projectMessage(msg("telemetry2", {}), prior, { notice: (t) => notices.push(t) });
    expect(vm).toEqual(prior);
    expect(notices).toHaveLength(1);
    expect(notices[0]).toContain("telemetry2");
  });

  it("schema mismatch raises a banner but keeps the stream alive", () => {
    const vm = projectMessage(msg("guidance", guidancePayload(), 99), initialViewModel());
    expect(vm.banner).toContain("v99");
    const next = projectMessage(msg("feedback", feedbackPayload()), vm);
    expect(next.speedometer).not.toBeNull();
  });
});

describe("no client-side judgment", () => {
  it("colors follow engine statuses even when the raw numbers disagree", () => {
    // raw values sit exactly on the means, yet the engine says fail
    const contradictory = feedbackPayload({
      pitch: judged(21.6, 21.6, 7.95, "fail", "decrease"),
      speed: judged(5.41, 5.41, 0.41, "fail"),
      wrist: judged(9.96, 9.96, 3.93, "fail"),
      height_trace: [[0, 0.0, false]],
    });
    const vm = projectMessage(msg("feedback", contradictory), initialViewModel());
    expect(vm.pitchWidget?.color).toBe("red");
    expect(vm.jointSliders[0].color).toBe("red");
    expect(vm.heightChart[0].color).toBe("red");

    // raw values far outside one SD, yet the engine says pass
    const blessed = feedbackPayload({
      pitch: judged(80.0, 21.6, 7.95, "pass"),
      elbow: judged(50.0, 4.97, 0.96, "pass"),
      height_trace: [[0, 5.0, true]],
    });
    const vm2 = projectMessage(msg("feedback", blessed), initialViewModel());
    expect(vm2.pitchWidget?.color).toBe("green");
    expect(vm2.jointSliders[1].color).toBe("green");
    expect(vm2.heightChart[0].color).toBe("green");
  });
});

describe("projection purity", () => {
  it("is deterministic and does not mutate the prior model", () => {
    const prior = initialViewModel();
    const frozen = JSON.stringify(prior);
    const message = msg("feedback", feedbackPayload());
    const a = projectMessage(message, prior);
    const b = projectMessage(message, prior);
    expect(a).toEqual(b);
    expect(JSON.stringify(prior)).toBe(frozen);
  });
});

describe("needleFraction", () => {
  it("is exactly 0.5 at the mean and clamps at the dial ends", () => {
    expect(needleFraction(5.41, 5.41, 0.41)).toBe(0.5);
    expect(needleFraction(100, 5.41, 0.41)).toBe(1);
    expect(needleFraction(-100, 5.41, 0.41)).toBe(0);
    expect(needleFraction(5.41 + 3 * 0.41, 5.41, 0.41)).toBeCloseTo(1.0, 12);
  });
});
