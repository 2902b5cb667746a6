/** Wire types for the engine's NDJSON stream (schema v1). */

export const SCHEMA_VERSION = 1;

export type Vec3 = [number, number, number];

export type Halo = "green" | "yellow" | "red";
export type JudgeStatus = "pass" | "fail";
export type ArrowDirection = "increase" | "decrease" | "none";

export interface JudgedValue {
  value: number;
  mean: number;
  sd: number;
  status: JudgeStatus;
  direction: ArrowDirection;
}

export interface TrackSpec {
  center: Vec3;
  plane_height: number;
  radius: number;
  alpha: number;         // rad/s^2, constant angular acceleration
  sweep_back: number;    // rad
  sweep_forward: number; // rad
}

export interface GuidancePayload {
  t: number;
  state: "idle" | "ready";
  shuttle_target: Vec3;
  racket_target: Vec3;
  sagittal: Vec3;
  halo_shuttle: Halo;
  halo_racket: Halo;
  track: TrackSpec | null;
}

export interface FeedbackPayload {
  serve: { session: string; index: number };
  label: string;
  report: {
    pitch: JudgedValue;
    speed: JudgedValue;
    height_trace: Array<[number, number, boolean]>;
    wrist: JudgedValue;
    elbow: JudgedValue;
    shoulder: JudgedValue;
    wrist_upper_bound_deg: number;
  };
}

export interface FramePayload {
  t: number;
  complete: boolean;
  points: Record<string, Vec3>;
}

export interface StateChangePayload {
  src: string;
  dst: string;
  frame: number;
  t: number;
  reason: string;
  serve: { session: string; index: number } | null;
}

export interface StreamMessage {
  v: number;
  kind: string;
  seq: number;
  payload: unknown;
}

/** Parse one NDJSON line; null when it is not a well-formed message object. */
export function parseMessage(raw: string): StreamMessage | null {
  try {
    const doc = JSON.parse(raw);
    if (typeof doc !== "object" || doc === null) return null;
    if (typeof doc.kind !== "string" || typeof doc.v !== "number") return null;
    return doc as StreamMessage;
  } catch {
    return null;
  }
}
