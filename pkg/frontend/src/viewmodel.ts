/** Pure projection from stream messages onto the panel view model.
 *
 * Every pass/fail color here is copied from an engine status; the client
 * never re-derives a judgment from raw numbers.
 */

import {
  FeedbackPayload,
  FramePayload,
  GuidancePayload,
  Halo,
  JudgedValue,
  SCHEMA_VERSION,
  StateChangePayload,
  StreamMessage,
  TrackSpec,
  Vec3,
} from "./messages.js";

export type WidgetColor = "green" | "red";

export interface ReadyView {
  haloShuttle: Halo;
  haloRacket: Halo;
  shuttleTarget: Vec3;
  racketTarget: Vec3;
  sagittal: Vec3;
  visible: boolean;
}

export interface PitchWidget {
  targetAngleDeg: number;  // tilted reference rectangle
  resultAngleDeg: number;
  color: WidgetColor;
  arrow: boolean;
  arrowTowardSmaller: boolean;
}

export interface Speedometer {
  needleFraction: number;  // 0.5 = dial center = target speed
  valueMps: number;
  targetMps: number;
}

export interface HeightPoint {
  t: number;
  delta: number;
  color: WidgetColor;
}

export interface JointSlider {
  name: "wrist" | "elbow" | "shoulder";
  fraction: number;        // 0.5 = model mean
  valueDeg: number;
  color: WidgetColor;
}

export interface PanelViewModel {
  state: string;
  ready: ReadyView;
  swingTrack: TrackSpec | null;
  pitchWidget: PitchWidget | null;
  speedometer: Speedometer | null;
  heightChart: HeightPoint[];
  jointSliders: JointSlider[];
  avatar: Record<string, Vec3>;
  serveCount: number;
  banner: string | null;
}

const DIAL_HALF_RANGE_SD = 3; // dial/slider spans mean +- 3 SD

export function initialViewModel(): PanelViewModel {
  return {
    state: "idle",
    ready: {
      haloShuttle: "red",
      haloRacket: "red",
      shuttleTarget: [0, 0, 0],
      racketTarget: [0, 0, 0],
      sagittal: [0, 0, 1],
      visible: true,
    },
    swingTrack: null,
    pitchWidget: null,
    speedometer: null,
    heightChart: [],
    jointSliders: [],
    avatar: {},
    serveCount: 0,
    banner: null,
  };
}

function statusColor(status: "pass" | "fail"): WidgetColor {
  return status === "pass" ? "green" : "red";
}

/** Needle/slider position: 0.5 exactly at the model mean, clamped to [0, 1]. */
export function needleFraction(value: number, mean: number, sd: number): number {
  if (value === mean) return 0.5;
  const span = 2 * DIAL_HALF_RANGE_SD * (sd > 0 ? sd : 1);
  return Math.min(1, Math.max(0, 0.5 + (value - mean) / span));
}

function slider(name: JointSlider["name"], jv: JudgedValue): JointSlider {
  return {
    name,
    fraction: needleFraction(jv.value, jv.mean, jv.sd),
    valueDeg: jv.value,
    color: statusColor(jv.status),
  };
}

function applyGuidance(vm: PanelViewModel, p: GuidancePayload): PanelViewModel {
  return {
    ...vm,
    state: p.state,
    ready: {
      haloShuttle: p.halo_shuttle,
      haloRacket: p.halo_racket,
      shuttleTarget: p.shuttle_target,
      racketTarget: p.racket_target,
      sagittal: p.sagittal,
      visible: p.state === "idle",
    },
    swingTrack: p.track,
  };
}

function applyFeedback(vm: PanelViewModel, p: FeedbackPayload): PanelViewModel {
  const r = p.report;
  return {
    ...vm,
    serveCount: p.serve.index,
    pitchWidget: {
      targetAngleDeg: r.pitch.mean,
      resultAngleDeg: r.pitch.value,
      color: statusColor(r.pitch.status),
      arrow: r.pitch.direction !== "none",
      arrowTowardSmaller: r.pitch.direction === "decrease",
    },
    speedometer: {
      needleFraction: needleFraction(r.speed.value, r.speed.mean, r.speed.sd),
      valueMps: r.speed.value,
      targetMps: r.speed.mean,
    },
    heightChart: r.height_trace.map(([t, delta, within]) => ({
      t,
      delta,
      color: within ? "green" : "red",
    })),
    jointSliders: [
      slider("wrist", r.wrist),
      slider("elbow", r.elbow),
      slider("shoulder", r.shoulder),
    ],
  };
}

export interface Notifier {
  notice(text: string): void;
}

const consoleNotifier: Notifier = { notice: (text) => console.warn(text) };

/** Fold one message into the view model; unknown kinds are ignored with a
 * console notice, and a schema mismatch raises a banner but keeps going. */
export function projectMessage(
  msg: StreamMessage,
  prior: PanelViewModel,
  notifier: Notifier = consoleNotifier,
): PanelViewModel {
  if (msg.v !== SCHEMA_VERSION) {
    return { ...prior, banner: `stream schema v${msg.v} != v${SCHEMA_VERSION}` };
  }
  switch (msg.kind) {
    case "guidance":
      return applyGuidance(prior, msg.payload as GuidancePayload);
    case "feedback":
      return applyFeedback(prior, msg.payload as FeedbackPayload);
    case "frame": {
      const p = msg.payload as FramePayload;
      return { ...prior, avatar: p.points };
    }
    case "state_change": {
      const p = msg.payload as StateChangePayload;
      return { ...prior, state: p.dst };
    }
    case "session_stats":
    case "gap":
      return prior;
    default:
      notifier.notice(`ignoring unknown message kind: ${msg.kind}`);
      return prior;
  }
}
