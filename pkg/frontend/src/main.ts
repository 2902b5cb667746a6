/** Page wiring: connect, project, repaint on the browser frame clock. */

import { resolveStreamUrl, SocketLike, StreamClient } from "./client.js";
import { draw } from "./render.js";
import { PanelViewModel } from "./viewmodel.js";

const canvas = document.getElementById("panel") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;

let viewModel: PanelViewModel | null = null;
const started = performance.now();

const client = new StreamClient(
  resolveStreamUrl(window.location.search, window.location.host),
  (vm) => { viewModel = vm; },
  (url) => new WebSocket(url) as unknown as SocketLike,
);
client.start();

function repaint(): void {
  if (viewModel) {
    draw(ctx, viewModel, (performance.now() - started) / 1000);
  }
  requestAnimationFrame(repaint);
}
requestAnimationFrame(repaint);
