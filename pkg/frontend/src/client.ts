/** Reconnecting stream consumer: feeds parsed messages into the view model
 * and resets to the idle guidance view whenever the connection is remade. */

import { parseMessage } from "./messages.js";
import { initialViewModel, PanelViewModel, projectMessage } from "./viewmodel.js";

export interface SocketLike {
  onopen: (() => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface BackoffConfig {
  initialMs: number;
  maxMs: number;
  factor: number;
}

export const DEFAULT_BACKOFF: BackoffConfig = { initialMs: 250, maxMs: 8000, factor: 2 };

export function nextDelay(attempt: number, cfg: BackoffConfig = DEFAULT_BACKOFF): number {
  return Math.min(cfg.maxMs, cfg.initialMs * Math.pow(cfg.factor, attempt));
}

export class StreamClient {
  viewModel: PanelViewModel = initialViewModel();
  connected = false;
  private attempt = 0;
  private stopped = false;
  private socket: SocketLike | null = null;

  constructor(
    private url: string,
    private onUpdate: (vm: PanelViewModel) => void,
    private makeSocket: SocketFactory,
    private schedule: (fn: () => void, ms: number) => void = (fn, ms) => setTimeout(fn, ms),
    private backoff: BackoffConfig = DEFAULT_BACKOFF,
  ) {}

  start(): void {
    this.stopped = false;
    this.connect();
  }

  stop(): void {
    this.stopped = true;
    this.socket?.close();
  }

  private connect(): void {
    const socket = this.makeSocket(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.connected = true;
      this.attempt = 0;
      // fresh connection: back to the idle guidance view
      this.viewModel = initialViewModel();
      this.onUpdate(this.viewModel);
    };
    socket.onmessage = (ev) => {
      const msg = parseMessage(ev.data);
      if (msg === null) return;
      this.viewModel = projectMessage(msg, this.viewModel);
      this.onUpdate(this.viewModel);
    };
    socket.onerror = () => socket.close();
    socket.onclose = () => {
      this.connected = false;
      if (this.stopped) return;
      const delay = nextDelay(this.attempt, this.backoff);
      this.attempt += 1;
      this.schedule(() => this.connect(), delay);
    };
  }
}

/** Engine URL from ?engine=... or the page host. */
export function resolveStreamUrl(search: string, host: string): string {
  const params = new URLSearchParams(search);
  const engine = params.get("engine");
  if (engine) {
    return engine.endsWith("/stream") ? engine : `${engine.replace(/\/$/, "")}/stream`;
  }
  return `ws://${host}/stream`;
}
