/** DOM wiring for the console. All data comes from the /v1 HTTP API. */

import { ApiClient, ApiError } from "./api.js";
import { subscribeEvents } from "./events.js";
import { compositeOver, emptyLayer, exportLayerBits, paintMask, strokeBox } from "./overlay.js";
import type { Layer } from "./overlay.js";
import { decodeRle, encodeRle } from "./rle.js";
import { ConsoleStore } from "./state.js";
import { RANKING_HEADER, formatRow, rankingRows } from "./ranking.js";
import type { CloudPayload, GraspsPayload, RleMask, RunTrace } from "./types.js";
import { fitCamera, gripperGlyph, projectPoint, projectPoints, rotateCamera, zoomCamera } from "./view3d.js";
import type { OrbitCamera } from "./view3d.js";

const MASK_COLOR: [number, number, number] = [66, 200, 130];
const BOX_COLOR: [number, number, number] = [255, 180, 40];
const MASK_ALPHA = 110;

const api = new ApiClient("");
const store = new ConsoleStore();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const banner = el<HTMLDivElement>("banner");
const sceneSelect = el<HTMLSelectElement>("scene-select");
const instructionInput = el<HTMLInputElement>("instruction");
const submitButton = el<HTMLButtonElement>("submit");
const stageList = el<HTMLUListElement>("stages");
const partLabel = el<HTMLSpanElement>("part-label");
const overrideInput = el<HTMLInputElement>("override-part");
const overrideButton = el<HTMLButtonElement>("override");
const exportButton = el<HTMLButtonElement>("export-overlay");
const sceneCanvas = el<HTMLCanvasElement>("scene-canvas");
const cloudCanvas = el<HTMLCanvasElement>("cloud-canvas");
const rankingTable = el<HTMLTableElement>("ranking");
const runList = el<HTMLUListElement>("runs");

interface ActiveArtifacts {
  mask: RleMask | null;
  grasps: GraspsPayload | null;
  cloud: CloudPayload | null;
  maskLayer: Layer | null;
}

let artifacts: ActiveArtifacts = { mask: null, grasps: null, cloud: null, maskLayer: null };
let camera: OrbitCamera | null = null;

function showError(err: unknown): void {
  if (err instanceof ApiError && err.status === 0) {
    store.setBanner("Service unreachable. Is the grasping service running?");
  } else if (err instanceof ApiError) {
    store.setBanner(err.reason);
  } else {
    store.setBanner(String(err));
  }
}

async function refreshScenes(): Promise<void> {
  const scenes = await api.scenes();
  store.setScenes(scenes);
  sceneSelect.innerHTML = "";
  for (const scene of scenes) {
    const option = document.createElement("option");
    option.value = scene.scene_id;
    option.textContent = `${scene.scene_id} (${scene.classes.join(", ")})`;
    sceneSelect.appendChild(option);
  }
}

async function refreshRuns(): Promise<void> {
  store.setRuns(await api.runs());
}

function renderRuns(): void {
  runList.innerHTML = "";
  for (const run of [...store.getState().runs].reverse()) {
    const item = document.createElement("li");
    const label = run.override_part ? `override:${run.override_part}` : run.instruction;
    item.textContent = `[${run.status}] ${run.run_id} ${label}`;
    item.classList.toggle("active", run.run_id === store.getState().activeRunId);
    item.onclick = () => void selectRun(run.run_id);
    runList.appendChild(item);
  }
}

function renderStages(): void {
  const runId = store.getState().activeRunId;
  stageList.innerHTML = "";
  if (!runId) return;
  for (const view of store.stageViews(runId)) {
    const item = document.createElement("li");
    item.className = `stage-${view.status}`;
    item.textContent = `${view.name}: ${view.status}${view.detail ? ` | ${view.detail}` : ""}`;
    stageList.appendChild(item);
  }
  const part = store.displayedPart(runId);
  partLabel.textContent = part ?? "-";
  overrideButton.disabled = !store.canOverride(runId) || overrideInput.value.trim() === "";
  exportButton.disabled = artifacts.maskLayer === null;
}

async function drawScene(runId: string, trace: RunTrace): Promise<void> {
  const ctx = sceneCanvas.getContext("2d");
  if (!ctx) return;
  const image = new Image();
  image.src = api.runImageUrl(runId);
  await image.decode().catch(() => undefined);
  if (image.width === 0) return;
  sceneCanvas.width = image.width;
  sceneCanvas.height = image.height;
  ctx.drawImage(image, 0, 0);
  if (!artifacts.mask) return;

  const decoded = decodeRle(artifacts.mask);
  let layer = paintMask(emptyLayer(decoded.width, decoded.height), decoded.bits, MASK_COLOR, MASK_ALPHA);
  artifacts.maskLayer = layer;
  const grounding = trace.stages.find((s) => s.name === "grounding" && s.status === "ok");
  const box = grounding?.data?.box as [number, number, number, number] | undefined;
  if (box) layer = strokeBox(layer, box, BOX_COLOR);

  const base: Layer = {
    width: image.width,
    height: image.height,
    data: ctx.getImageData(0, 0, image.width, image.height).data,
  };
  const blended = compositeOver(base, layer);
  const pixels = new Uint8ClampedArray(blended.data);
  ctx.putImageData(new ImageData(pixels, blended.width, blended.height), 0, 0);
}

function drawCloud(): void {
  const ctx = cloudCanvas.getContext("2d");
  if (!ctx || !artifacts.cloud) return;
  const viewport = { width: cloudCanvas.width, height: cloudCanvas.height };
  if (!camera) camera = fitCamera(artifacts.cloud.points, viewport);
  ctx.fillStyle = "#10141c";
  ctx.fillRect(0, 0, viewport.width, viewport.height);

  const projected = projectPoints(artifacts.cloud.points, camera, viewport);
  ctx.fillStyle = "#7fb2ff";
  for (let i = 0; i < projected.length; i += 2) {
    ctx.fillRect(projected[i], projected[i + 1], 1.5, 1.5);
  }

  if (!artifacts.grasps) return;
  artifacts.grasps.grasps.forEach((grasp, index) => {
    const winner = index === 0;
    if (!winner && index > 8) return;
    ctx.lineWidth = winner ? 2.5 : 1;
    for (const segment of gripperGlyph(grasp)) {
      const a = projectPoint(segment.a, camera!, viewport);
      const b = projectPoint(segment.b, camera!, viewport);
      ctx.strokeStyle =
        segment.kind === "approach" ? "#ffb428" : winner ? "#42ff8a" : "#5a657d";
      ctx.beginPath();
      ctx.moveTo(a[0], a[1]);
      ctx.lineTo(b[0], b[1]);
      if (segment.kind === "approach") {
        // arrowhead at the palm end of the approach vector
        const dx = b[0] - a[0];
        const dy = b[1] - a[1];
        const len = Math.hypot(dx, dy) || 1;
        const ux = dx / len;
        const uy = dy / len;
        ctx.lineTo(b[0] - 6 * ux + 3 * uy, b[1] - 6 * uy - 3 * ux);
        ctx.moveTo(b[0], b[1]);
        ctx.lineTo(b[0] - 6 * ux - 3 * uy, b[1] - 6 * uy + 3 * ux);
      }
      ctx.stroke();
    }
  });
}

function renderRanking(): void {
  const runId = store.getState().activeRunId;
  rankingTable.innerHTML = "";
  if (!runId) return;
  const trace = store.trace(runId);
  if (!trace) return;
  const rows = rankingRows(trace, artifacts.grasps);
  if (rows.length === 0) return;
  const head = rankingTable.createTHead().insertRow();
  for (const title of RANKING_HEADER) {
    const cell = document.createElement("th");
    cell.textContent = title;
    head.appendChild(cell);
  }
  const body = rankingTable.createTBody();
  for (const row of rows) {
    const tr = body.insertRow();
    if (row.rank === 1) tr.className = "winner";
    for (const value of formatRow(row)) tr.insertCell().textContent = value;
  }
}

async function loadArtifacts(runId: string, trace: RunTrace): Promise<void> {
  artifacts = { mask: null, grasps: null, cloud: null, maskLayer: null };
  camera = null;
  if (trace.status === "ok") {
    [artifacts.mask, artifacts.grasps, artifacts.cloud] = await Promise.all([
      api.mask(runId),
      api.grasps(runId),
      api.cloud(runId),
    ]);
  }
  await drawScene(runId, trace);
  drawCloud();
}

async function selectRun(runId: string): Promise<void> {
  store.setActive(runId);
  try {
    const trace = await api.trace(runId);
    store.putTrace(trace);
    await loadArtifacts(runId, trace);
    store.setBanner(null);
  } catch (err) {
    showError(err);
  }
  renderAll();
}

function watchRun(runId: string): void {
  store.setActive(runId);
  renderAll();
  subscribeEvents(
    api.eventsUrl(runId),
    (event) => {
      store.appendEvent(runId, event);
      renderStages();
      if (event.event === "run_finished") {
        void selectRun(runId).then(refreshRuns).then(renderRuns);
      }
    },
    () => store.setBanner("Event stream interrupted."),
  );
}

async function submit(): Promise<void> {
  const instruction = instructionInput.value;
  if (!store.canSubmit(instruction)) return;
  try {
    const response = await api.submitRun(instruction, sceneSelect.value);
    store.setBanner(null);
    watchRun(response.run_id);
  } catch (err) {
    showError(err);
  }
}

async function overrideActive(): Promise<void> {
  const runId = store.getState().activeRunId;
  const part = overrideInput.value;
  if (!runId || !store.canOverride(runId) || part.trim() === "") return;
  try {
    const response = await api.override(runId, part);
    store.setBanner(null);
    watchRun(response.run_id);
  } catch (err) {
    showError(err);
  }
}

function exportOverlay(): void {
  if (!artifacts.maskLayer) return;
  const bits = exportLayerBits(artifacts.maskLayer);
  const rle = encodeRle({
    height: artifacts.maskLayer.height,
    width: artifacts.maskLayer.width,
    bits,
  });
  const blob = new Blob([JSON.stringify(rle)], { type: "application/json" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = `${store.getState().activeRunId ?? "mask"}-overlay.json`;
  link.click();
  URL.revokeObjectURL(link.href);
}

function renderBanner(): void {
  const message = store.getState().banner;
  banner.textContent = message ?? "";
  banner.classList.toggle("hidden", message === null);
}

function renderAll(): void {
  renderBanner();
  renderRuns();
  renderStages();
  renderRanking();
}

function wireInputs(): void {
  submitButton.disabled = true;
  instructionInput.addEventListener("input", () => {
    submitButton.disabled = !store.canSubmit(instructionInput.value);
  });
  overrideInput.addEventListener("input", renderStages);
  submitButton.addEventListener("click", () => void submit());
  overrideButton.addEventListener("click", () => void overrideActive());
  exportButton.addEventListener("click", exportOverlay);

  let dragging = false;
  let last: [number, number] = [0, 0];
  cloudCanvas.addEventListener("mousedown", (e) => {
    dragging = true;
    last = [e.clientX, e.clientY];
  });
  window.addEventListener("mouseup", () => {
    dragging = false;
  });
  window.addEventListener("mousemove", (e) => {
    if (!dragging || !camera) return;
    camera = rotateCamera(camera, (e.clientX - last[0]) * 0.01, (e.clientY - last[1]) * 0.01);
    last = [e.clientX, e.clientY];
    drawCloud();
  });
  cloudCanvas.addEventListener("wheel", (e) => {
    if (!camera) return;
    e.preventDefault();
    camera = zoomCamera(camera, e.deltaY < 0 ? 1.1 : 0.9);
    drawCloud();
  });
}

async function boot(): Promise<void> {
  store.subscribe(renderBanner);
  wireInputs();
  try {
    await api.health();
    await refreshScenes();
    await refreshRuns();
    renderAll();
  } catch (err) {
    showError(err);
  }
}

void boot();
