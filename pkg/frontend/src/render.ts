/** Canvas painting: guidance panel on the left, the four feedback widgets
 * on the right.  Pure drawing; every color arrives inside the view model. */

import { renderSwingTrack } from "./swingtrack.js";
import { PanelViewModel } from "./viewmodel.js";

const HALO_FILL: Record<string, string> = {
  green: "#2e9e4f", yellow: "#d9a300", red: "#c23b2f",
};
const WIDGET_FILL: Record<string, string> = { green: "#2e9e4f", red: "#c23b2f" };

export function draw(ctx: CanvasRenderingContext2D, vm: PanelViewModel, clock: number): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#10151a";
  ctx.fillRect(0, 0, width, height);

  drawGuidance(ctx, vm, clock, 0, 0, width * 0.5, height);
  const rx = width * 0.52;
  const rw = width * 0.46;
  drawPitch(ctx, vm, rx, height * 0.04, rw, height * 0.2);
  drawSpeedometer(ctx, vm, rx, height * 0.28, rw, height * 0.2);
  drawHeightChart(ctx, vm, rx, height * 0.52, rw, height * 0.2);
  drawJointSliders(ctx, vm, rx, height * 0.76, rw, height * 0.2);

  if (vm.banner) {
    ctx.fillStyle = "#c23b2f";
    ctx.fillRect(0, 0, width, 22);
    ctx.fillStyle = "#fff";
    ctx.font = "13px sans-serif";
    ctx.fillText(vm.banner, 8, 15);
  }
}

function project(p: [number, number, number], w: number, h: number): [number, number] {
  // simple side view: x <- body z (forward), y <- height
  return [w * 0.5 + p[2] * w * 0.55, h * 0.9 - p[1] * h * 0.38];
}

function drawGuidance(
  ctx: CanvasRenderingContext2D, vm: PanelViewModel, clock: number,
  x: number, y: number, w: number, h: number,
): void {
  ctx.save();
  ctx.translate(x, y);
  ctx.fillStyle = "#9fb2c3";
  ctx.font = "13px sans-serif";
  ctx.fillText(`state: ${vm.state}  serves: ${vm.serveCount}`, 10, 18);

  // avatar dots
  for (const point of Object.values(vm.avatar)) {
    const [px, py] = project(point, w, h);
    ctx.fillStyle = "#6b7f91";
    ctx.beginPath();
    ctx.arc(px, py, 3, 0, 2 * Math.PI);
    ctx.fill();
  }

  if (vm.ready.visible) {
    for (const [target, halo] of [
      [vm.ready.shuttleTarget, vm.ready.haloShuttle],
      [vm.ready.racketTarget, vm.ready.haloRacket],
    ] as const) {
      const [px, py] = project(target, w, h);
      ctx.strokeStyle = HALO_FILL[halo];
      ctx.lineWidth = 3;
      ctx.beginPath();
      ctx.arc(px, py, 14, 0, 2 * Math.PI);
      ctx.stroke();
    }
  }

  if (vm.swingTrack) {
    const [cx, cy] = project(vm.swingTrack.center, w, h);
    const radius = vm.swingTrack.radius * h * 0.3;
    for (const spoke of renderSwingTrack(vm.swingTrack, clock)) {
      ctx.strokeStyle = `rgba(120, 200, 255, ${0.15 + 0.85 * spoke.intensity})`;
      ctx.lineWidth = 1 + 2 * spoke.intensity;
      ctx.beginPath();
      ctx.moveTo(cx, cy);
      ctx.lineTo(cx + radius * Math.cos(spoke.angle), cy + radius * Math.sin(spoke.angle));
      ctx.stroke();
    }
  }
  ctx.restore();
}

function widgetFrame(ctx: CanvasRenderingContext2D, x: number, y: number, w: number, h: number, title: string): void {
  ctx.strokeStyle = "#334050";
  ctx.strokeRect(x, y, w, h);
  ctx.fillStyle = "#9fb2c3";
  ctx.font = "12px sans-serif";
  ctx.fillText(title, x + 6, y + 14);
}

function drawPitch(ctx: CanvasRenderingContext2D, vm: PanelViewModel, x: number, y: number, w: number, h: number): void {
  widgetFrame(ctx, x, y, w, h, "racket pitch at contact");
  const widget = vm.pitchWidget;
  if (!widget) return;
  const cx = x + w / 2, cy = y + h * 0.75, len = Math.min(w, h) * 0.42;
  const bar = (deg: number, color: string, width: number) => {
    const a = (-deg * Math.PI) / 180;
    ctx.strokeStyle = color;
    ctx.lineWidth = width;
    ctx.beginPath();
    ctx.moveTo(cx - len * Math.cos(a), cy - len * Math.sin(a));
    ctx.lineTo(cx + len * Math.cos(a), cy + len * Math.sin(a));
    ctx.stroke();
  };
  bar(widget.targetAngleDeg, "#3b6ea5", 8);
  bar(widget.resultAngleDeg, WIDGET_FILL[widget.color], 4);
  if (widget.arrow) {
    ctx.fillStyle = WIDGET_FILL[widget.color];
    ctx.font = "16px sans-serif";
    ctx.fillText(widget.arrowTowardSmaller ? "⟲ lower" : "⟳ raise", x + w - 70, y + 20);
  }
}

function drawSpeedometer(ctx: CanvasRenderingContext2D, vm: PanelViewModel, x: number, y: number, w: number, h: number): void {
  widgetFrame(ctx, x, y, w, h, "contact speed (target at center)");
  const meter = vm.speedometer;
  if (!meter) return;
  const cx = x + w / 2, cy = y + h * 0.9, radius = Math.min(w, h) * 0.6;
  ctx.strokeStyle = "#334050";
  ctx.lineWidth = 6;
  ctx.beginPath();
  ctx.arc(cx, cy, radius, Math.PI, 2 * Math.PI);
  ctx.stroke();
  const angle = Math.PI * (1 + meter.needleFraction);
  ctx.strokeStyle = "#e8edf2";
  ctx.lineWidth = 3;
  ctx.beginPath();
  ctx.moveTo(cx, cy);
  ctx.lineTo(cx + radius * 0.9 * Math.cos(angle), cy + radius * 0.9 * Math.sin(angle));
  ctx.stroke();
  ctx.fillStyle = "#9fb2c3";
  ctx.fillText(`${meter.valueMps.toFixed(2)} m/s (target ${meter.targetMps.toFixed(2)})`, cx - 60, y + h - 6);
}

function drawHeightChart(ctx: CanvasRenderingContext2D, vm: PanelViewModel, x: number, y: number, w: number, h: number): void {
  widgetFrame(ctx, x, y, w, h, "racket height change, forward swing");
  if (vm.heightChart.length === 0) return;
  const t0 = vm.heightChart[0].t;
  const t1 = vm.heightChart[vm.heightChart.length - 1].t || t0 + 1;
  const scaleX = (t: number) => x + 8 + ((t - t0) / Math.max(t1 - t0, 1e-9)) * (w - 16);
  const scaleY = (d: number) => y + h / 2 - d * (h * 1.6);
  ctx.strokeStyle = "#334050";
  ctx.beginPath();
  ctx.moveTo(x + 8, y + h / 2);
  ctx.lineTo(x + w - 8, y + h / 2); // baseline: height at backswing start
  ctx.stroke();
  for (let i = 1; i < vm.heightChart.length; i++) {
    const a = vm.heightChart[i - 1];
    const b = vm.heightChart[i];
    ctx.strokeStyle = WIDGET_FILL[b.color];
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(scaleX(a.t), scaleY(a.delta));
    ctx.lineTo(scaleX(b.t), scaleY(b.delta));
    ctx.stroke();
  }
}

function drawJointSliders(ctx: CanvasRenderingContext2D, vm: PanelViewModel, x: number, y: number, w: number, h: number): void {
  widgetFrame(ctx, x, y, w, h, "joint involvement (center = model mean)");
  vm.jointSliders.forEach((s, i) => {
    const sy = y + 34 + i * ((h - 40) / 3);
    ctx.fillStyle = "#9fb2c3";
    ctx.fillText(s.name, x + 8, sy + 4);
    ctx.strokeStyle = "#334050";
    ctx.lineWidth = 4;
    ctx.beginPath();
    ctx.moveTo(x + 70, sy);
    ctx.lineTo(x + w - 16, sy);
    ctx.stroke();
    const px = x + 70 + s.fraction * (w - 86);
    ctx.fillStyle = WIDGET_FILL[s.color];
    ctx.beginPath();
    ctx.arc(px, sy, 7, 0, 2 * Math.PI);
    ctx.fill();
  });
}
