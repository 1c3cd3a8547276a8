/** DOM wiring: controls, charts, phase badge and metrics panel. */

import { buildForceDisplacementScene, buildStripScene } from "./chart.js";
import type { ChartScene } from "./chart.js";
import { ConsoleClient } from "./client.js";
import { applyMessage, createState, metricsRows, setStatus } from "./state.js";
import type { Action } from "./protocol.js";

const state = createState();
let dirty = true;

const client = new ConsoleClient({
  onMessage: (msg) => {
    applyMessage(state, msg);
    dirty = true;
  },
  onStatus: (connected) => {
    setStatus(state, connected ? "connected" : "disconnected");
    dirty = true;
  },
});

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function drawScene(canvas: HTMLCanvasElement, scene: ChartScene): void {
  const ctx = canvas.getContext("2d");
  if (ctx === null) {
    return;
  }
  ctx.clearRect(0, 0, scene.width, scene.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(42, 8, scene.width - 50, scene.height - 50);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(scene.xAxis.label, scene.width / 2 - 30, scene.height - 6);
  ctx.save();
  ctx.translate(12, scene.height / 2 + 24);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(scene.yAxis.label, 0, 0);
  ctx.restore();
  ctx.fillText(scene.yAxis.max.toFixed(1), 4, 16);
  ctx.fillText(scene.yAxis.min.toFixed(1), 4, scene.height - 44);
  ctx.fillText(scene.xAxis.min.toFixed(0), 42, scene.height - 28);
  ctx.fillText(scene.xAxis.max.toFixed(0), scene.width - 28, scene.height - 28);

  for (let i = 1; i < scene.points.length; i++) {
    const a = scene.points[i - 1];
    const b = scene.points[i];
    ctx.strokeStyle = b.color;
    ctx.beginPath();
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    ctx.stroke();
  }
  for (const m of scene.markers) {
    ctx.fillStyle = m.color;
    ctx.beginPath();
    ctx.arc(m.x, m.y, 4, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillText(m.label, m.x + 6, m.y - 6);
  }
  if (scene.finalCircle !== null) {
    ctx.strokeStyle = "red";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(scene.finalCircle.x, scene.finalCircle.y, 7, 0, 2 * Math.PI);
    ctx.stroke();
    ctx.lineWidth = 1;
  }
}

function render(): void {
  if (dirty) {
    dirty = false;
    const fd = el<HTMLCanvasElement>("fd-chart");
    const strip = el<HTMLCanvasElement>("strip-chart");
    drawScene(fd, buildForceDisplacementScene(state, fd.width, fd.height));
    drawScene(strip, buildStripScene(state, strip.width, strip.height));

    const badge = el<HTMLSpanElement>("phase-badge");
    badge.textContent = state.phase;
    badge.dataset.phase = state.phase;

    el<HTMLDivElement>("banner").hidden = state.status !== "disconnected";
    el<HTMLDivElement>("error-line").textContent = state.lastError ?? "";

    const panel = el<HTMLTableSectionElement>("metrics-body");
    panel.innerHTML = metricsRows(state)
      .map((r) => `<tr><td>${r.label}</td><td>${r.value} ${r.unit}</td></tr>`)
      .join("");

    for (const button of document.querySelectorAll<HTMLButtonElement>(
      "button[data-action]",
    )) {
      button.disabled =
        state.status !== "connected" ||
        (state.detached && button.dataset.action !== "reset");
    }
  }
  requestAnimationFrame(render);
}

function wireControls(): void {
  const speed = el<HTMLSelectElement>("speed");
  for (const button of document.querySelectorAll<HTMLButtonElement>(
    "button[data-action]",
  )) {
    button.addEventListener("click", () => {
      const action = button.dataset.action as Action;
      const needsSpeed = action === "advance" || action === "retract";
      const sent = client.sendCommand(
        action,
        needsSpeed ? Number(speed.value) : undefined,
      );
      if (sent === null) {
        state.lastError = "not connected";
      }
      if (action === "reset") {
        const buffer = state.buffer;
        buffer.clear();
        state.events = [];
        state.metrics = null;
        state.phase = "NAVIGATION";
        state.detached = false;
        state.lastSeq = -1;
      }
      dirty = true;
    });
  }
}

function start(): void {
  const proto = location.protocol === "https:" ? "wss" : "ws";
  client.connect(`${proto}://${location.host}/ws`);
  wireControls();
  requestAnimationFrame(render);
}

start();
