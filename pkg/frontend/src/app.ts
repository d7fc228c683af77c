// Browser playground: steer the simulated head pose with arrow keys or
// sliders, run the calibration flows, chase targets, follow the path.
// The canvas renders only server-confirmed state; the local pose input is
// shown separately as "commanded".

import { dwellFraction, initialView, applyServerMessage, meanSummary, UiSessionView } from "./sessionView.js";
import { parseServerMessage, serializeClientMessage, Mode } from "./protocol.js";
import { createPoseInput, keyDown, keyUp, setSliders, tick } from "./poseInput.js";
import { drawStripChart } from "./stripChart.js";
import { sCurvePath, Point } from "./pathOverlay.js";

const TICK_MS = 50; // matches the gateway's sampling period

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const sceneCanvas = el<HTMLCanvasElement>("scene");
const stripCanvas = el<HTMLCanvasElement>("strip");
const banner = el<HTMLDivElement>("banner");
const overlay = el<HTMLDivElement>("overlay");
const toast = el<HTMLDivElement>("toast");
const modeSelect = el<HTMLSelectElement>("mode");
const calibrateBtn = el<HTMLButtonElement>("calibrate");
const pathToggle = el<HTMLInputElement>("path-toggle");
const autoCenterToggle = el<HTMLInputElement>("auto-center");
const pitchSlider = el<HTMLInputElement>("pitch");
const yawSlider = el<HTMLInputElement>("yaw");
const poseReadout = el<HTMLSpanElement>("pose-readout");
const resultsBody = el<HTMLTableSectionElement>("results-body");
const summaryLine = el<HTMLDivElement>("summary");

let view: UiSessionView = initialView();
let socket: WebSocket | null = null;
let connected = false;
const pose = createPoseInput(20, true);
let path: Point[] = sCurvePath(sceneCanvas.width, sceneCanvas.height);
let resultRowsRendered = 0;
let lastErrorShown: string | null = null;

function connect(): void {
  const url = `ws://${location.host}/ws`;
  socket = new WebSocket(url);
  socket.addEventListener("open", () => {
    connected = true;
    banner.textContent = `connected to ${url}`;
    banner.className = "banner ok";
  });
  socket.addEventListener("close", () => {
    connected = false;
    banner.textContent = "disconnected: pose input disabled, reconnecting in 2 s";
    banner.className = "banner bad";
    view = initialView();
    resultsBody.innerHTML = "";
    resultRowsRendered = 0;
    setTimeout(connect, 2000);
  });
  socket.addEventListener("message", (event) => {
    try {
      view = applyServerMessage(view, parseServerMessage(String(event.data)));
    } catch (err) {
      console.warn("bad server message", err);
    }
  });
}

function sendPoseTick(): void {
  if (!connected || socket === null || socket.readyState !== WebSocket.OPEN) return;
  pose.autoCenter = autoCenterToggle.checked;
  const cmd = tick(pose, TICK_MS);
  poseReadout.textContent = `commanded pitch ${cmd.pitch_deg.toFixed(1)} / yaw ${cmd.yaw_deg.toFixed(1)}`;
  socket.send(serializeClientMessage({ type: "pose", ...cmd }));
}

calibrateBtn.addEventListener("click", () => {
  if (!connected || socket === null) return;
  view.lastError = null;
  lastErrorShown = null;
  toast.className = "toast hidden";
  socket.send(serializeClientMessage({ type: "calibrate", mode: modeSelect.value as Mode }));
});

window.addEventListener("keydown", (e) => {
  if (e.key.startsWith("Arrow")) {
    e.preventDefault();
    keyDown(pose, e.key);
  }
});
window.addEventListener("keyup", (e) => keyUp(pose, e.key));

function slidersChanged(): void {
  setSliders(pose, Number(pitchSlider.value), Number(yawSlider.value));
}
pitchSlider.addEventListener("input", slidersChanged);
yawSlider.addEventListener("input", slidersChanged);

function renderOverlay(): void {
  if (view.phase === "calibrating") {
    if (view.mode === "joystick") {
      overlay.innerHTML = "<strong>calibrating joystick</strong><br>hold the rest pose";
    } else {
      const progress = view.progress ?? {};
      const badge = (name: string) =>
        `<span class="badge ${Number(progress[name] ?? 0) > 0 ? "done" : ""}">${name}</span>`;
      overlay.innerHTML =
        "<strong>calibrating direct mapping</strong><br>sweep the head to every extreme<br>" +
        ["up", "down", "left", "right"].map(badge).join(" ");
    }
    overlay.className = "overlay";
  } else {
    overlay.className = "overlay hidden";
  }

  if (view.lastError && view.lastError !== lastErrorShown) {
    lastErrorShown = view.lastError;
    toast.innerHTML = `${view.lastError} <button id="retry">retry</button>`;
    toast.className = "toast";
    el<HTMLButtonElement>("retry").addEventListener("click", () => calibrateBtn.click());
  }
}

function renderScene(): void {
  const ctx = sceneCanvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = sceneCanvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#161b22";
  ctx.fillRect(0, 0, width, height);

  if (pathToggle.checked) {
    ctx.strokeStyle = "#d2a8ff";
    ctx.lineWidth = 3;
    ctx.beginPath();
    path.forEach((p, i) => (i === 0 ? ctx.moveTo(p.x, p.y) : ctx.lineTo(p.x, p.y)));
    ctx.stroke();
  }

  const target = view.target;
  if (target && !pathToggle.checked) {
    ctx.strokeStyle = "#7ee787";
    ctx.lineWidth = 2;
    ctx.strokeRect(target.cx - target.w / 2, target.cy - target.w / 2, target.w, target.w);
    const frac = dwellFraction(view);
    if (frac > 0) {
      ctx.beginPath();
      ctx.strokeStyle = "#7ee787";
      ctx.lineWidth = 4;
      ctx.arc(target.cx, target.cy, target.w / 2 + 8, -Math.PI / 2, -Math.PI / 2 + frac * 2 * Math.PI);
      ctx.stroke();
    }
  }

  if (view.cursor) {
    ctx.fillStyle = "#58a6ff";
    ctx.beginPath();
    ctx.arc(view.cursor.x, view.cursor.y, 6, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function renderResults(): void {
  while (resultRowsRendered < view.results.length) {
    const r = view.results[resultRowsRendered]!;
    const tr = document.createElement("tr");
    const fmt = (v: number | null, digits = 3) => (v === null ? "-" : v.toFixed(digits));
    tr.innerHTML =
      `<td>${r.trial}</td><td>${r.d.toFixed(1)}</td><td>${r.w}</td>` +
      `<td>${r.mt_ms}</td><td>${fmt(r.id, 2)}</td><td>${fmt(r.pe)}</td>` +
      `<td>${fmt(r.tp)}</td><td>${r.success ? "ok" : "abort"}</td>`;
    resultsBody.appendChild(tr);
    resultRowsRendered += 1;
  }
  const summary = meanSummary(view);
  if (view.phase === "done" && summary) {
    summaryLine.textContent =
      `session done: ${summary.n} successes, mean PE ${summary.pe.toFixed(3)}, mean TP ${summary.tp.toFixed(3)} /s`;
  } else if (summary) {
    summaryLine.textContent =
      `${summary.n} successes so far, mean PE ${summary.pe.toFixed(3)}, mean TP ${summary.tp.toFixed(3)} /s`;
  }
}

function frame(): void {
  renderOverlay();
  renderScene();
  const stripCtx = stripCanvas.getContext("2d");
  if (stripCtx) {
    drawStripChart(stripCtx, stripCanvas.width, stripCanvas.height, view.signals, view.thresholds);
  }
  renderResults();
  requestAnimationFrame(frame);
}

connect();
setInterval(sendPoseTick, TICK_MS);
requestAnimationFrame(frame);
