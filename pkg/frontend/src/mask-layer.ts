/**
 * Raster damage-mask layer painted with a round brush.
 *
 * File convention: 8-bit grayscale, painted (missing) pixels = 255,
 * known pixels = 0. The in-memory buffer uses the same byte values so
 * export is a copy, never a conversion.
 */

export type BrushMode = 'brush' | 'eraser';

export class MaskLayer {
  private data: Uint8Array;
  private undoStack: Uint8Array[] = [];
  private redoStack: Uint8Array[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
    initial?: Uint8Array,
  ) {
    if (width < 1 || height < 1) {
      throw new Error(`mask layer needs positive dimensions, got ${width}x${height}`);
    }
    if (initial && initial.length !== width * height) {
      throw new Error(
        `mask buffer length ${initial.length} != ${width}x${height}`,
      );
    }
    this.data = initial ? Uint8Array.from(initial) : new Uint8Array(width * height);
  }

  static importBytes(width: number, height: number, bytes: Uint8Array): MaskLayer {
    // any nonzero byte in an imported file counts as painted
    const layer = new MaskLayer(width, height);
    for (let i = 0; i < bytes.length; i++) {
      layer.data[i] = bytes[i] >= 128 ? 255 : 0;
    }
    return layer;
  }

  /** Snapshot the layer before a stroke so undo restores it byte-exactly. */
  beginStroke(): void {
    this.undoStack.push(Uint8Array.from(this.data));
    this.redoStack = [];
  }

  /** Stamp one round brush dab; call repeatedly along a pointer path. */
  applyBrush(cx: number, cy: number, radius: number, mode: BrushMode = 'brush'): void {
    const value = mode === 'brush' ? 255 : 0;
    const r = Math.max(0, radius);
    const y0 = Math.max(0, Math.ceil(cy - r));
    const y1 = Math.min(this.height - 1, Math.floor(cy + r));
    for (let y = y0; y <= y1; y++) {
      const span = Math.sqrt(r * r - (y - cy) * (y - cy));
      const x0 = Math.max(0, Math.ceil(cx - span));
      const x1 = Math.min(this.width - 1, Math.floor(cx + span));
      for (let x = x0; x <= x1; x++) {
        this.data[y * this.width + x] = value;
      }
    }
  }

  undo(): boolean {
    const prev = this.undoStack.pop();
    if (!prev) return false;
    this.redoStack.push(this.data);
    this.data = prev;
    return true;
  }

  redo(): boolean {
    const next = this.redoStack.pop();
    if (!next) return false;
    this.undoStack.push(this.data);
    this.data = next;
    return true;
  }

  clear(): void {
    this.beginStroke();
    this.data = new Uint8Array(this.width * this.height);
  }

  isPainted(x: number, y: number): boolean {
    return this.data[y * this.width + x] === 255;
  }

  isEmpty(): boolean {
    return this.data.every((v) => v === 0);
  }

  /** Fraction of painted pixels, mirroring the service's hole_ratio. */
  holeRatio(): number {
    let painted = 0;
    for (const v of this.data) if (v === 255) painted++;
    return painted / this.data.length;
  }

  /** 8-bit grayscale payload, painted = 255. */
  exportBytes(): Uint8Array {
    return Uint8Array.from(this.data);
  }
}
