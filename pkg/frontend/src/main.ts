/** Browser wiring: canvas painting, job submission, and result comparison. */

import { POLL_INTERVAL_MS, ServiceClient } from './api';
import { BrushMode } from './mask-layer';
import { CanvasSession, HistoryEntry } from './session';

type Tool = 'brush' | 'eraser' | 'line';

interface UiState {
  session: CanvasSession | null;
  imageBitmap: ImageBitmap | null;
  tool: Tool;
  brushRadius: number;
  lineWidth: number;
  pendingStroke: { x: number; y: number }[];
  compareEntry: HistoryEntry | null;
}

const state: UiState = {
  session: null,
  imageBitmap: null,
  tool: 'brush',
  brushRadius: 8,
  lineWidth: 2,
  pendingStroke: [],
  compareEntry: null,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

/** Encode an 8-bit grayscale layer as a PNG blob via an offscreen canvas. */
async function grayToPngBlob(
  bytes: Uint8Array,
  width: number,
  height: number,
): Promise<Blob> {
  const canvas = document.createElement('canvas');
  canvas.width = width;
  canvas.height = height;
  const ctx = canvas.getContext('2d')!;
  const rgba = ctx.createImageData(width, height);
  for (let i = 0; i < bytes.length; i++) {
    rgba.data[4 * i] = bytes[i];
    rgba.data[4 * i + 1] = bytes[i];
    rgba.data[4 * i + 2] = bytes[i];
    rgba.data[4 * i + 3] = 255;
  }
  ctx.putImageData(rgba, 0, 0);
  return new Promise((resolve, reject) =>
    canvas.toBlob((b) => (b ? resolve(b) : reject(new Error('PNG encode failed'))), 'image/png'),
  );
}

function setBanner(text: string, isError = false): void {
  const banner = el<HTMLDivElement>('banner');
  banner.textContent = text;
  banner.className = isError ? 'banner error' : 'banner';
}

function redraw(): void {
  const canvas = el<HTMLCanvasElement>('workspace');
  const ctx = canvas.getContext('2d')!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (state.imageBitmap) ctx.drawImage(state.imageBitmap, 0, 0);
  const session = state.session;
  if (!session) return;

  // translucent red mask overlay
  ctx.save();
  ctx.fillStyle = 'rgba(220, 40, 40, 0.45)';
  for (let y = 0; y < session.mask.height; y++) {
    for (let x = 0; x < session.mask.width; x++) {
      if (session.mask.isPainted(x, y)) ctx.fillRect(x, y, 1, 1);
    }
  }
  // line strokes in dark blue
  ctx.fillStyle = 'rgba(20, 40, 160, 0.9)';
  const raster = session.lines.rasterize();
  for (let i = 0; i < raster.length; i++) {
    if (raster[i]) ctx.fillRect(i % session.lines.width, Math.floor(i / session.lines.width), 1, 1);
  }
  ctx.restore();
}

async function drawComparison(entry: HistoryEntry): Promise<void> {
  const canvas = el<HTMLCanvasElement>('compare');
  const bitmap = await createImageBitmap(new Blob([entry.result.slice()]));
  canvas.width = bitmap.width;
  canvas.height = bitmap.height;
  const ctx = canvas.getContext('2d')!;
  const slider = Number(el<HTMLInputElement>('wipe').value) / 100;
  if (state.imageBitmap) ctx.drawImage(state.imageBitmap, 0, 0);
  ctx.save();
  ctx.beginPath();
  ctx.rect(0, 0, canvas.width * slider, canvas.height);
  ctx.clip();
  ctx.drawImage(bitmap, 0, 0);
  ctx.restore();
}

function refreshHistory(): void {
  const list = el<HTMLUListElement>('history');
  list.replaceChildren();
  for (const entry of state.session?.history ?? []) {
    const item = document.createElement('li');
    const ratio = entry.holeRatio === null ? '?' : (entry.holeRatio * 100).toFixed(1);
    item.textContent = `run ${entry.id} (hole ${ratio}%)`;
    item.onclick = () => {
      state.compareEntry = entry;
      void drawComparison(entry);
    };
    list.appendChild(item);
  }
}

function pointerPos(ev: PointerEvent): { x: number; y: number } {
  const rect = el<HTMLCanvasElement>('workspace').getBoundingClientRect();
  return { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
}

function bindPainting(): void {
  const canvas = el<HTMLCanvasElement>('workspace');
  let painting = false;

  canvas.onpointerdown = (ev) => {
    const session = state.session;
    if (!session) return;
    painting = true;
    const { x, y } = pointerPos(ev);
    if (state.tool === 'line') {
      state.pendingStroke = [{ x, y }];
    } else {
      session.mask.beginStroke();
      session.mask.applyBrush(x, y, state.brushRadius, state.tool as BrushMode);
    }
    redraw();
  };

  canvas.onpointermove = (ev) => {
    const session = state.session;
    if (!session || !painting) return;
    const { x, y } = pointerPos(ev);
    if (state.tool === 'line') {
      state.pendingStroke.push({ x, y });
    } else {
      session.mask.applyBrush(x, y, state.brushRadius, state.tool as BrushMode);
    }
    redraw();
  };

  canvas.onpointerup = () => {
    const session = state.session;
    if (session && state.tool === 'line' && state.pendingStroke.length > 0) {
      session.lines.addStroke(state.pendingStroke, state.lineWidth);
      state.pendingStroke = [];
    }
    painting = false;
    redraw();
  };
}

async function loadMural(file: File, client: ServiceClient): Promise<void> {
  const bitmap = await createImageBitmap(file);
  state.imageBitmap = bitmap;
  const canvas = el<HTMLCanvasElement>('workspace');
  canvas.width = bitmap.width;
  canvas.height = bitmap.height;
  state.session = new CanvasSession(client, {
    width: bitmap.width,
    height: bitmap.height,
    imageBlob: file,
    modelName: el<HTMLSelectElement>('model').value,
    encodeMask: grayToPngBlob,
    encodeLine: grayToPngBlob,
    pollIntervalMs: POLL_INTERVAL_MS,
  });
  refreshHistory();
  redraw();
  setBanner(`loaded ${file.name} (${bitmap.width}x${bitmap.height})`);
}

async function populateModels(client: ServiceClient): Promise<void> {
  const select = el<HTMLSelectElement>('model');
  const models = await client.listModels();
  select.replaceChildren();
  for (const model of models) {
    const option = document.createElement('option');
    option.value = model.name;
    option.textContent = model.loaded ? model.name : `${model.name} (not loaded)`;
    select.appendChild(option);
  }
}

export function bootstrap(): void {
  const client = new ServiceClient('');
  bindPainting();

  el<HTMLInputElement>('file').onchange = (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (file) void loadMural(file, client).catch((err) => setBanner(String(err), true));
  };

  for (const tool of ['brush', 'eraser', 'line'] as Tool[]) {
    el<HTMLButtonElement>(`tool-${tool}`).onclick = () => {
      state.tool = tool;
    };
  }
  el<HTMLInputElement>('brush-size').oninput = (ev) => {
    state.brushRadius = Number((ev.target as HTMLInputElement).value);
  };
  el<HTMLButtonElement>('undo').onclick = () => {
    state.session?.mask.undo();
    redraw();
  };
  el<HTMLButtonElement>('redo').onclick = () => {
    state.session?.mask.redo();
    redraw();
  };
  el<HTMLInputElement>('wipe').oninput = () => {
    if (state.compareEntry) void drawComparison(state.compareEntry);
  };

  el<HTMLButtonElement>('run').onclick = async () => {
    const session = state.session;
    if (!session) return;
    setBanner('running…');
    try {
      const entry = await session.runAndCompare();
      state.compareEntry = entry;
      refreshHistory();
      await drawComparison(entry);
      setBanner(`run ${entry.id} done`);
    } catch (err) {
      // session (layers + history) is preserved; just surface the message
      setBanner(state.session?.lastError ?? String(err), true);
    }
  };

  void populateModels(client).catch((err) => setBanner(String(err), true));
}

if (typeof document !== 'undefined' && document.getElementById('workspace')) {
  bootstrap();
}
