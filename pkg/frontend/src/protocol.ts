/**
 * Wire protocol types for the session service.
 *
 * JSON text frames over a WebSocket; every server message carries a
 * gapless per-session sequence number. Units: seconds, newtons,
 * millimeters; compression is negative.
 */

export type Action = "advance" | "retract" | "stop" | "detach" | "reset";

export type Phase =
  | "NAVIGATION"
  | "LOBE_DEPLOYMENT"
  | "REPOSITIONING"
  | "DEPLOYED"
  | "DETACHED";

export type EventKind =
  | "E1_LOBE_ONSET"
  | "E2_LOBE_EXPANDED"
  | "E3_DISK_EXPANDED"
  | "E4_DETACHED";

export interface CmdMessage {
  type: "cmd";
  action: Action;
  speed_mm_s?: number;
  preset?: number;
  seed?: number;
}

export interface TelemetryMessage {
  type: "telemetry";
  seq: number;
  t: number;
  force_N: number;
  disp_mm: number;
  phase: Phase;
}

export interface EventMessage {
  type: "event";
  seq: number;
  kind: EventKind;
  t: number;
  disp_mm: number;
  force_N: number;
  source: "truth" | "detected";
}

export interface MetricsMessage {
  type: "metrics";
  seq: number;
  metrics: {
    duration_s: number;
    min_force_N: number;
    max_force_N: number;
    final_force_N: number;
  };
}

export interface ErrorMessage {
  type: "error";
  seq: number;
  code: string;
  message: string;
}

export type ServerMessage =
  | TelemetryMessage
  | EventMessage
  | MetricsMessage
  | ErrorMessage;

export function makeCommand(action: Action, speedMmS?: number): CmdMessage {
  const msg: CmdMessage = { type: "cmd", action };
  if (speedMmS !== undefined) {
    msg.speed_mm_s = speedMmS;
  }
  return msg;
}

export function parseServerMessage(text: string): ServerMessage | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof raw !== "object" || raw === null) {
    return null;
  }
  const type = (raw as { type?: string }).type;
  if (
    type === "telemetry" ||
    type === "event" ||
    type === "metrics" ||
    type === "error"
  ) {
    return raw as ServerMessage;
  }
  return null;
}
