/**
 * Vector line-drawing layer: editable polyline strokes with adjustable
 * width, rasterized on export.
 *
 * File convention: 8-bit grayscale, stroke pixels = 0 on a 255 background.
 * An imported raster (e.g. automatically extracted lines) is kept as a base
 * layer and unioned with the vector strokes on export.
 */

export interface StrokePoint {
  x: number;
  y: number;
}

export interface LineStroke {
  points: StrokePoint[];
  width: number;
}

export class LineLayer {
  private strokes: LineStroke[] = [];
  private imported: Uint8Array | null = null; // 1 = stroke, in memory

  constructor(readonly width: number, readonly height: number) {
    if (width < 1 || height < 1) {
      throw new Error(`line layer needs positive dimensions, got ${width}x${height}`);
    }
  }

  addStroke(points: StrokePoint[], strokeWidth = 1): void {
    if (points.length === 0) {
      throw new Error('a stroke needs at least one point');
    }
    if (strokeWidth < 1) {
      throw new Error(`stroke width must be >= 1, got ${strokeWidth}`);
    }
    this.strokes.push({ points: points.map((p) => ({ ...p })), width: strokeWidth });
  }

  removeLastStroke(): boolean {
    return this.strokes.pop() !== undefined;
  }

  clear(): void {
    this.strokes = [];
    this.imported = null;
  }

  strokeCount(): number {
    return this.strokes.length;
  }

  /** Merge an extracted line file (stroke = 0) as the base layer. */
  importBytes(bytes: Uint8Array): void {
    if (bytes.length !== this.width * this.height) {
      throw new Error(
        `line buffer length ${bytes.length} != ${this.width}x${this.height}`,
      );
    }
    this.imported = new Uint8Array(bytes.length);
    for (let i = 0; i < bytes.length; i++) {
      this.imported[i] = bytes[i] < 128 ? 1 : 0;
    }
  }

  /** Binary raster, 1 = stroke: base layer unioned with all vector strokes. */
  rasterize(): Uint8Array {
    const grid = new Uint8Array(this.width * this.height);
    if (this.imported) grid.set(this.imported);
    for (const stroke of this.strokes) {
      const radius = (stroke.width - 1) / 2;
      let prev: StrokePoint | null = null;
      for (const point of stroke.points) {
        if (prev) this.stampSegment(grid, prev, point, radius);
        else this.stampDisc(grid, point.x, point.y, radius);
        prev = point;
      }
    }
    return grid;
  }

  /** 8-bit grayscale payload with the inverted file polarity (stroke = 0). */
  exportBytes(): Uint8Array {
    const grid = this.rasterize();
    const out = new Uint8Array(grid.length);
    for (let i = 0; i < grid.length; i++) out[i] = grid[i] ? 0 : 255;
    return out;
  }

  private stampDisc(grid: Uint8Array, cx: number, cy: number, radius: number): void {
    const y0 = Math.max(0, Math.round(cy - radius));
    const y1 = Math.min(this.height - 1, Math.round(cy + radius));
    for (let y = y0; y <= y1; y++) {
      const dy = y - cy;
      const span = Math.sqrt(Math.max(0, radius * radius - dy * dy));
      const x0 = Math.max(0, Math.round(cx - span));
      const x1 = Math.min(this.width - 1, Math.round(cx + span));
      for (let x = x0; x <= x1; x++) grid[y * this.width + x] = 1;
    }
  }

  private stampSegment(
    grid: Uint8Array,
    a: StrokePoint,
    b: StrokePoint,
    radius: number,
  ): void {
    const steps = Math.max(1, Math.ceil(Math.hypot(b.x - a.x, b.y - a.y)));
    for (let s = 0; s <= steps; s++) {
      const t = s / steps;
      this.stampDisc(grid, a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), radius);
    }
  }
}
