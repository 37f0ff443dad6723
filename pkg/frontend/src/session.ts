/**
 * One restoration working session: the mural, its editable mask and line
 * layers, and the ordered history of inpainting results with the exact
 * inputs that produced each of them.
 */

import { JobStatus, ServiceClient } from './api';
import { LineLayer } from './line-layer';
import { MaskLayer } from './mask-layer';

export interface HistoryEntry {
  readonly id: number;
  readonly jobId: string;
  /** Mask payload at submit time (file convention, painted = 255). */
  readonly maskSnapshot: Uint8Array;
  /** Line payload at submit time (file convention, stroke = 0). */
  readonly lineSnapshot: Uint8Array;
  readonly holeRatio: number | null;
  /** Raw bytes of the raster returned by the service. */
  readonly result: Uint8Array;
}

/** Wraps layer payloads for upload; the browser swaps in canvas PNG encoding. */
export type LayerEncoder = (
  bytes: Uint8Array,
  width: number,
  height: number,
) => Blob | Promise<Blob>;

const rawEncoder: LayerEncoder = (bytes) => new Blob([bytes.slice()]);

export interface SessionOptions {
  width: number;
  height: number;
  /** The mural exactly as it will be uploaded with each job. */
  imageBlob: Blob;
  modelName: string;
  encodeMask?: LayerEncoder;
  encodeLine?: LayerEncoder;
  pollIntervalMs?: number;
}

export class CanvasSession {
  readonly mask: MaskLayer;
  readonly lines: LineLayer;
  readonly history: HistoryEntry[] = [];
  activeJobId: string | null = null;
  lastError: string | null = null;

  private inFlight = false;
  private nextEntryId = 1;

  constructor(
    private readonly client: ServiceClient,
    private readonly opts: SessionOptions,
  ) {
    this.mask = new MaskLayer(opts.width, opts.height);
    this.lines = new LineLayer(opts.width, opts.height);
  }

  get busy(): boolean {
    return this.inFlight;
  }

  /**
   * Submit the current layers, wait for completion, and append an immutable
   * history entry. At most one job is in flight per session; failures leave
   * layers and history untouched and surface the service message verbatim.
   */
  async runAndCompare(): Promise<HistoryEntry> {
    if (this.inFlight) {
      throw new Error('a job is already running for this session');
    }
    if (this.mask.isEmpty()) {
      throw new Error('paint the damaged area before running');
    }
    const maskBytes = this.mask.exportBytes();
    const lineBytes = this.lines.exportBytes();
    const encodeMask = this.opts.encodeMask ?? rawEncoder;
    const encodeLine = this.opts.encodeLine ?? rawEncoder;

    this.inFlight = true;
    this.lastError = null;
    try {
      const jobId = await this.client.submitJob({
        image: this.opts.imageBlob,
        mask: await encodeMask(maskBytes, this.opts.width, this.opts.height),
        line: await encodeLine(lineBytes, this.opts.width, this.opts.height),
        modelName: this.opts.modelName,
      });
      this.activeJobId = jobId;
      const status: JobStatus = await this.client.pollUntilDone(
        jobId,
        this.opts.pollIntervalMs,
      );
      const result = new Uint8Array(await this.client.jobResult(jobId));
      const entry: HistoryEntry = Object.freeze({
        id: this.nextEntryId++,
        jobId,
        maskSnapshot: maskBytes,
        lineSnapshot: lineBytes,
        holeRatio: status.hole_ratio,
        result,
      });
      this.history.push(entry);
      return entry;
    } catch (err) {
      this.lastError = err instanceof Error ? err.message : String(err);
      throw err;
    } finally {
      this.inFlight = false;
      this.activeJobId = null;
    }
  }

  getEntry(id: number): HistoryEntry | undefined {
    return this.history.find((e) => e.id === id);
  }
}
