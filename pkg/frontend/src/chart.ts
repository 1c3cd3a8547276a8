/**
 * Chart scene construction, kept free of DOM/canvas dependencies so it
 * can be tested headless. A scene is plain data: pixel-space polylines,
 * per-vertex colors, event markers and an optional final-state circle.
 */

import type { ConsoleState } from "./state.js";

export interface ScenePoint {
  x: number;
  y: number;
  color: string;
}

export interface SceneMarker {
  x: number;
  y: number;
  label: string;
  color: string;
}

export interface AxisSpec {
  min: number;
  max: number;
  label: string;
}

export interface ChartScene {
  points: ScenePoint[];
  markers: SceneMarker[];
  finalCircle: { x: number; y: number } | null;
  xAxis: AxisSpec;
  yAxis: AxisSpec;
  width: number;
  height: number;
}

const MARGIN = 42;

function pad(lo: number, hi: number): [number, number] {
  const span = hi - lo || 1;
  return [lo - 0.05 * span, hi + 0.05 * span];
}

function scale(v: number, lo: number, hi: number, a: number, b: number): number {
  return a + ((v - lo) / (hi - lo)) * (b - a);
}

/**
 * Monotone perceptual colormap (dark blue -> magenta -> yellow) over
 * u in [0, 1]; indicates temporal progression along the curve.
 */
export function timeColor(u: number): string {
  const c = Math.min(1, Math.max(0, u));
  const r = Math.round(255 * Math.min(1, 0.1 + 1.3 * c));
  const g = Math.round(255 * Math.max(0, 1.4 * c - 0.5));
  const b = Math.round(255 * Math.max(0, 0.6 - 0.9 * c + 0.55 * (1 - c)));
  return `rgb(${r},${g},${b})`;
}

const EVENT_COLORS: Record<string, string> = {
  E1_LOBE_ONSET: "#2b8cbe",
  E2_LOBE_EXPANDED: "#31a354",
  E3_DISK_EXPANDED: "#756bb1",
};

/** Force vs displacement, colored by elapsed time; red circle at E4. */
export function buildForceDisplacementScene(
  state: ConsoleState,
  width: number,
  height: number,
): ChartScene {
  const pts = state.buffer.toArray();
  const empty: ChartScene = {
    points: [],
    markers: [],
    finalCircle: null,
    xAxis: { min: 0, max: 1, label: "displacement [mm]" },
    yAxis: { min: -1, max: 1, label: "force [N]" },
    width,
    height,
  };
  if (pts.length === 0) {
    return empty;
  }
  const [x0, x1] = pad(
    Math.min(...pts.map((p) => p.disp)),
    Math.max(...pts.map((p) => p.disp)),
  );
  const [y0, y1] = pad(
    Math.min(...pts.map((p) => p.force)),
    Math.max(...pts.map((p) => p.force)),
  );
  const t0 = pts[0].t;
  const t1 = pts[pts.length - 1].t;
  const toX = (p: { disp: number }) =>
    scale(p.disp, x0, x1, MARGIN, width - 8);
  const toY = (f: number) => scale(f, y0, y1, height - MARGIN, 8);

  const points = pts.map((p) => ({
    x: toX(p),
    y: toY(p.force),
    color: timeColor(t1 > t0 ? (p.t - t0) / (t1 - t0) : 0),
  }));
  const markers: SceneMarker[] = state.events
    .filter((e) => e.kind !== "E4_DETACHED")
    .map((e) => ({
      x: toX({ disp: e.disp_mm }),
      y: toY(e.force_N),
      label: e.kind.slice(0, 2),
      color: EVENT_COLORS[e.kind] ?? "#666",
    }));

  let finalCircle: { x: number; y: number } | null = null;
  const e4 = state.events.find((e) => e.kind === "E4_DETACHED");
  if (e4 !== undefined) {
    finalCircle = { x: toX({ disp: e4.disp_mm }), y: toY(e4.force_N) };
  }
  return {
    points,
    markers,
    finalCircle,
    xAxis: { min: x0, max: x1, label: "displacement [mm]" },
    yAxis: { min: y0, max: y1, label: "force [N]" },
    width,
    height,
  };
}

/** Force vs time strip chart over the buffered window. */
export function buildStripScene(
  state: ConsoleState,
  width: number,
  height: number,
): ChartScene {
  const pts = state.buffer.toArray();
  if (pts.length === 0) {
    return {
      points: [],
      markers: [],
      finalCircle: null,
      xAxis: { min: 0, max: 1, label: "time [s]" },
      yAxis: { min: -1, max: 1, label: "force [N]" },
      width,
      height,
    };
  }
  const [x0, x1] = pad(pts[0].t, pts[pts.length - 1].t);
  const [y0, y1] = pad(
    Math.min(...pts.map((p) => p.force)),
    Math.max(...pts.map((p) => p.force)),
  );
  const toX = (p: { t: number }) => scale(p.t, x0, x1, MARGIN, width - 8);
  const toY = (f: number) => scale(f, y0, y1, height - MARGIN, 8);
  const visible = state.events.filter(
    (e) => e.kind !== "E4_DETACHED" && e.t >= pts[0].t,
  );
  return {
    points: pts.map((p) => ({ x: toX(p), y: toY(p.force), color: "#d95f02" })),
    markers: visible.map((e) => ({
      x: toX({ t: e.t }),
      y: toY(e.force_N),
      label: e.kind.slice(0, 2),
      color: EVENT_COLORS[e.kind] ?? "#666",
    })),
    finalCircle: null,
    xAxis: { min: x0, max: x1, label: "time [s]" },
    yAxis: { min: y0, max: y1, label: "force [N]" },
    width,
    height,
  };
}
