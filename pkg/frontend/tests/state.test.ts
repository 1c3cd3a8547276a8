import { describe, expect, it } from "vitest";

import {
  BUFFER_CAPACITY,
  applyMessage,
  createState,
  formatMetric,
  metricsRows,
} from "../src/state.js";
import type { ServerMessage, Phase } from "../src/protocol.js";

let seq = 0;
function telemetry(t: number, force: number, disp: number, phase: Phase): ServerMessage {
  return { type: "telemetry", seq: seq++, t, force_N: force, disp_mm: disp, phase };
}

function resetSeq(): void {
  seq = 0;
}

describe("applyMessage", () => {
  it("tracks the latest telemetry phase in the badge", () => {
    resetSeq();
    const state = createState();
    applyMessage(state, telemetry(0.025, 0, 0, "NAVIGATION"));
    expect(state.phase).toBe("NAVIGATION");
    applyMessage(state, telemetry(0.05, -1.2, 39, "LOBE_DEPLOYMENT"));
    expect(state.phase).toBe("LOBE_DEPLOYMENT");
  });

  it("walks a full session through all five phases", () => {
    resetSeq();
    const state = createState();
    const phases: Phase[] = [
      "NAVIGATION",
      "LOBE_DEPLOYMENT",
      "REPOSITIONING",
      "DEPLOYED",
      "DETACHED",
    ];
    const seen: Phase[] = [];
    phases.forEach((phase, i) => {
      applyMessage(state, telemetry(0.025 * (i + 1), 0, 40 - i, phase));
      seen.push(state.phase);
    });
    expect(seen).toEqual(phases);
    expect(state.detached).toBe(true);
  });

  it("evicts FIFO beyond 60 s at 40 Hz", () => {
    resetSeq();
    const state = createState();
    for (let i = 0; i < BUFFER_CAPACITY + 100; i++) {
      applyMessage(state, telemetry(0.025 * (i + 1), i, 0, "NAVIGATION"));
    }
    expect(state.buffer.length).toBe(BUFFER_CAPACITY);
    expect(state.buffer.first()?.force).toBe(100); // oldest 100 dropped
    expect(state.buffer.last()?.force).toBe(BUFFER_CAPACITY + 99);
  });

  it("collects events and flags detachment", () => {
    resetSeq();
    const state = createState();
    applyMessage(state, {
      type: "event", seq: seq++, kind: "E2_LOBE_EXPANDED",
      t: 5.0, disp_mm: 23.5, force_N: 1.09, source: "detected",
    });
    expect(state.events).toHaveLength(1);
    expect(state.detached).toBe(false);
    applyMessage(state, {
      type: "event", seq: seq++, kind: "E4_DETACHED",
      t: 9.0, disp_mm: 2.0, force_N: -0.9, source: "detected",
    });
    expect(state.detached).toBe(true);
  });

  it("stores server metrics verbatim and counts seq gaps", () => {
    resetSeq();
    const state = createState();
    applyMessage(state, telemetry(0.025, 0, 0, "NAVIGATION"));
    applyMessage(state, {
      type: "metrics", seq: 5, // gap: 1..4 missing
      metrics: {
        duration_s: 18.8467, min_force_N: -2.2813,
        max_force_N: 1.0915, final_force_N: -0.9102,
      },
    });
    expect(state.seqGaps).toBe(1);
    expect(state.metrics?.duration_s).toBe(18.8467);
  });

  it("keeps the last error visible", () => {
    resetSeq();
    const state = createState();
    applyMessage(state, {
      type: "error", seq: seq++, code: "bad_cmd", message: "unknown action",
    });
    expect(state.lastError).toBe("bad_cmd: unknown action");
  });
});

describe("metrics panel", () => {
  it("rounds to exactly 2 decimals for display", () => {
    expect(formatMetric(18.8467)).toBe("18.85");
    expect(formatMetric(-0.905)).toBe("-0.91");
    expect(formatMetric(1)).toBe("1.00");
  });

  it("renders all four server metrics", () => {
    resetSeq();
    const state = createState();
    expect(metricsRows(state)).toEqual([]);
    applyMessage(state, {
      type: "metrics", seq: 0,
      metrics: {
        duration_s: 18.8467, min_force_N: -2.2813,
        max_force_N: 1.0915, final_force_N: -0.9102,
      },
    });
    const rows = metricsRows(state);
    expect(rows.map((r) => r.value)).toEqual(["18.85", "-2.28", "1.09", "-0.91"]);
  });
});
