/**
 * Console state and the message reducer.
 *
 * Charts render only data that arrived over the wire; the phase badge
 * always equals the latest telemetry phase; metrics are displayed
 * exactly as the server computed them, rounded to 2 decimals for
 * display only.
 */

import { RingBuffer } from "./ring.js";
import type {
  EventMessage,
  MetricsMessage,
  Phase,
  ServerMessage,
} from "./protocol.js";

// >= 60 s of telemetry at 40 Hz
export const BUFFER_CAPACITY = 60 * 40;

export interface TelemetryPoint {
  t: number;
  force: number;
  disp: number;
}

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

export interface ConsoleState {
  status: ConnectionStatus;
  buffer: RingBuffer<TelemetryPoint>;
  events: EventMessage[];
  phase: Phase;
  metrics: MetricsMessage["metrics"] | null;
  lastError: string | null;
  lastSeq: number;
  seqGaps: number;
  detached: boolean;
}

export function createState(): ConsoleState {
  return {
    status: "connecting",
    buffer: new RingBuffer<TelemetryPoint>(BUFFER_CAPACITY),
    events: [],
    phase: "NAVIGATION",
    metrics: null,
    lastError: null,
    lastSeq: -1,
    seqGaps: 0,
    detached: false,
  };
}

/** Apply one server message in place. */
export function applyMessage(state: ConsoleState, msg: ServerMessage): void {
  if (msg.seq !== state.lastSeq + 1 && state.lastSeq >= 0) {
    state.seqGaps += 1;
  }
  state.lastSeq = msg.seq;

  switch (msg.type) {
    case "telemetry":
      state.buffer.push({ t: msg.t, force: msg.force_N, disp: msg.disp_mm });
      state.phase = msg.phase;
      if (msg.phase === "DETACHED") {
        state.detached = true;
      }
      break;
    case "event":
      state.events.push(msg);
      if (msg.kind === "E4_DETACHED") {
        state.detached = true;
      }
      break;
    case "metrics":
      state.metrics = msg.metrics;
      break;
    case "error":
      state.lastError = `${msg.code}: ${msg.message}`;
      break;
  }
}

export function setStatus(state: ConsoleState, status: ConnectionStatus): void {
  state.status = status;
}

/** Display rounding for the metrics panel: exactly 2 decimals. */
export function formatMetric(value: number): string {
  return value.toFixed(2);
}

export interface MetricRow {
  label: string;
  value: string;
  unit: string;
}

export function metricsRows(state: ConsoleState): MetricRow[] {
  if (state.metrics === null) {
    return [];
  }
  const m = state.metrics;
  return [
    { label: "duration", value: formatMetric(m.duration_s), unit: "s" },
    { label: "min force", value: formatMetric(m.min_force_N), unit: "N" },
    { label: "max force", value: formatMetric(m.max_force_N), unit: "N" },
    { label: "final force", value: formatMetric(m.final_force_N), unit: "N" },
  ];
}
