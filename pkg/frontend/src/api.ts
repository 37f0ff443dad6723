/** Typed client for the inpainting job service. */

export interface ModelInfo {
  name: string;
  checkpoint_path: string;
  fingerprint: string;
  loaded: boolean;
}

export interface JobStatus {
  status: 'queued' | 'running' | 'done' | 'failed';
  hole_ratio: number | null;
  error?: string;
}

export interface JobInputs {
  image: Blob;
  mask: Blob;
  line: Blob;
  modelName: string;
}

export class ServiceError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
    this.name = 'ServiceError';
  }
}

export const POLL_INTERVAL_MS = 500;

type FetchLike = typeof fetch;

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!res.ok) {
      let detail = res.statusText;
      try {
        const body = await res.json();
        detail = body.detail ?? body.error ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ServiceError(detail, res.status);
    }
    return res;
  }

  async health(): Promise<{ ok: boolean; loaded_models: string[] }> {
    return (await this.request('/healthz')).json();
  }

  async listModels(): Promise<ModelInfo[]> {
    const body = await (await this.request('/api/models')).json();
    return body.models;
  }

  async loadModel(name: string): Promise<ModelInfo> {
    return (
      await this.request(`/api/models/${encodeURIComponent(name)}/load`, {
        method: 'POST',
      })
    ).json();
  }

  async submitJob(inputs: JobInputs): Promise<string> {
    const form = new FormData();
    form.append('image', inputs.image, 'image.png');
    form.append('mask', inputs.mask, 'mask.png');
    form.append('line', inputs.line, 'line.png');
    form.append('model_name', inputs.modelName);
    const body = await (
      await this.request('/api/jobs', { method: 'POST', body: form })
    ).json();
    return body.id;
  }

  async jobStatus(jobId: string): Promise<JobStatus> {
    return (await this.request(`/api/jobs/${jobId}`)).json();
  }

  async jobResult(jobId: string): Promise<ArrayBuffer> {
    return (await this.request(`/api/jobs/${jobId}/result`)).arrayBuffer();
  }

  /** Poll status until the job settles; rejects with the job's error on failure. */
  pollUntilDone(jobId: string, intervalMs = POLL_INTERVAL_MS): Promise<JobStatus> {
    return new Promise((resolve, reject) => {
      const tick = async () => {
        let status: JobStatus;
        try {
          status = await this.jobStatus(jobId);
        } catch (err) {
          clearInterval(timer);
          reject(err);
          return;
        }
        if (status.status === 'done') {
          clearInterval(timer);
          resolve(status);
        } else if (status.status === 'failed') {
          clearInterval(timer);
          reject(new ServiceError(status.error ?? 'job failed', 500));
        }
      };
      const timer = setInterval(tick, intervalMs);
      void tick();
    });
  }
}
