/** Thin WebSocket client for the session protocol. */

import { makeCommand, parseServerMessage } from "./protocol.js";
import type { Action, CmdMessage, ServerMessage } from "./protocol.js";

/** The subset of WebSocket the client needs (injectable for tests). */
export interface SocketLike {
  readyState: number;
  send(data: string): void;
  close(): void;
}

export const OPEN = 1;

export interface ClientCallbacks {
  onMessage(msg: ServerMessage): void;
  onStatus(connected: boolean): void;
}

export class ConsoleClient {
  private socket: SocketLike | null = null;

  constructor(private readonly callbacks: ClientCallbacks) {}

  attach(socket: SocketLike): void {
    this.socket = socket;
  }

  connect(url: string): void {
    const ws = new WebSocket(url);
    this.attach(ws);
    ws.onopen = () => this.callbacks.onStatus(true);
    ws.onclose = () => this.callbacks.onStatus(false);
    ws.onmessage = (ev: MessageEvent) => {
      const msg = parseServerMessage(String(ev.data));
      if (msg !== null) {
        this.callbacks.onMessage(msg);
      }
    };
  }

  get connected(): boolean {
    return this.socket !== null && this.socket.readyState === OPEN;
  }

  /**
   * Send an operator command; returns the message sent, or null when
   * disconnected (callers show the error banner in that case).
   */
  sendCommand(action: Action, speedMmS?: number): CmdMessage | null {
    if (!this.connected || this.socket === null) {
      return null;
    }
    const msg = makeCommand(action, speedMmS);
    this.socket.send(JSON.stringify(msg));
    return msg;
  }
}
