/** Swing-track indicator animation: backward sweep, then forward, at the
 * engine's constant angular acceleration; loops while the trainee is ready. */

import { TrackSpec } from "./messages.js";

export interface TrackPhaseTimes {
  backDuration: number;
  forwardDuration: number;
  total: number;
}

export function phaseTimes(spec: TrackSpec): TrackPhaseTimes {
  const back = Math.sqrt((2 * spec.sweep_back) / spec.alpha);
  const forward = Math.sqrt((2 * (spec.sweep_back + spec.sweep_forward)) / spec.alpha);
  return { backDuration: back, forwardDuration: forward, total: back + forward };
}

/** Angular displacement of the indicator at animation time t (one cycle).
 * Negative angles are the backward sweep; the forward sweep runs from the
 * backswing apex through zero to +sweep_forward. */
export function trackAngle(spec: TrackSpec, t: number): number {
  const times = phaseTimes(spec);
  const cycle = ((t % times.total) + times.total) % times.total;
  if (cycle <= times.backDuration) {
    return 0 - 0.5 * spec.alpha * cycle * cycle;
  }
  const dt = cycle - times.backDuration;
  return -spec.sweep_back + 0.5 * spec.alpha * dt * dt;
}

/** Angular speed at animation time t within one cycle. */
export function trackAngularSpeed(spec: TrackSpec, t: number): number {
  const times = phaseTimes(spec);
  const cycle = ((t % times.total) + times.total) % times.total;
  if (cycle <= times.backDuration) {
    return spec.alpha * cycle;
  }
  return spec.alpha * (cycle - times.backDuration);
}

export interface SpokeState {
  angle: number;      // fixed spoke position, rad around the wrist circle
  intensity: number;  // 0..1 highlight as the indicator passes
}

/** Fixed spokes with an intensity bump where the indicator currently is. */
export function renderSwingTrack(spec: TrackSpec, t: number, nSpokes = 24): SpokeState[] {
  const indicator = trackAngle(spec, t);
  const spacing = (2 * Math.PI) / nSpokes;
  const spokes: SpokeState[] = [];
  for (let i = 0; i < nSpokes; i++) {
    const angle = -Math.PI + i * spacing;
    const distance = Math.abs(angle - indicator);
    spokes.push({ angle, intensity: Math.max(0, 1 - distance / (2 * spacing)) });
  }
  return spokes;
}
