"""Job-based inpainting API used by the CLI and the restoration UI."""

from __future__ import annotations

import io as stdio
import queue
import threading
import time
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, File, Form, HTTPException, UploadFile
from fastapi.responses import JSONResponse, Response
from PIL import Image

from ..errors import CheckpointError
from ..models.bundle import ModelBundle
from ..models.pipeline import inpaint_image

QUEUE_CAPACITY = 64


@dataclass
class RegistryEntry:
    name: str
    checkpoint_path: str
    fingerprint: str = ""
    loaded: bool = False
    bundle: ModelBundle | None = None


class ModelRegistry:
    """Named checkpoints; at most one loaded bundle per name."""

    def __init__(self):
        self._entries: dict[str, RegistryEntry] = {}
        self._lock = threading.Lock()

    def register(self, name: str, checkpoint_path: str | Path) -> RegistryEntry:
        with self._lock:
            entry = RegistryEntry(name=name, checkpoint_path=str(checkpoint_path))
            self._entries[name] = entry
            return entry

    def load(self, name: str) -> RegistryEntry:
        with self._lock:
            if name not in self._entries:
                raise KeyError(name)
            entry = self._entries[name]
            if not entry.loaded:
                bundle = ModelBundle.load(entry.checkpoint_path).eval_mode()
                entry.bundle = bundle
                entry.fingerprint = bundle.fingerprint
                entry.loaded = True
            return entry

    def get_loaded(self, name: str) -> RegistryEntry | None:
        with self._lock:
            entry = self._entries.get(name)
            return entry if entry and entry.loaded else None

    def view(self) -> list[dict]:
        with self._lock:
            return [
                {
                    "name": e.name,
                    "checkpoint_path": e.checkpoint_path,
                    "fingerprint": e.fingerprint,
                    "loaded": e.loaded,
                }
                for e in self._entries.values()
            ]

    def loaded_names(self) -> list[str]:
        with self._lock:
            return [e.name for e in self._entries.values() if e.loaded]


@dataclass
class InpaintJob:
    id: str
    model_name: str
    image: np.ndarray
    line: np.ndarray
    mask: np.ndarray
    status: str = "queued"  # queued | running | done | failed
    error: str | None = None
    result_png: bytes | None = None
    hole_ratio: float | None = None
    timings: dict = field(default_factory=dict)


def _decode_image(data: bytes) -> np.ndarray:
    arr = np.asarray(Image.open(stdio.BytesIO(data)).convert("RGB"), dtype=np.float32)
    return arr / 127.5 - 1.0


def _decode_mask(data: bytes) -> np.ndarray:
    arr = np.asarray(Image.open(stdio.BytesIO(data)).convert("L"), dtype=np.uint8)
    return (arr >= 128).astype(np.float32)


def _decode_line(data: bytes) -> np.ndarray:
    arr = np.asarray(Image.open(stdio.BytesIO(data)).convert("L"), dtype=np.uint8)
    return (arr < 128).astype(np.float32)


def _encode_png(image: np.ndarray) -> bytes:
    arr = np.clip((image + 1.0) * 127.5, 0, 255).round().astype(np.uint8)
    buf = stdio.BytesIO()
    Image.fromarray(arr, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def create_app(registry: ModelRegistry | None = None) -> FastAPI:
    registry = registry or ModelRegistry()
    jobs: dict[str, InpaintJob] = {}
    jobs_lock = threading.Lock()
    work_queue: queue.Queue[str | None] = queue.Queue(maxsize=QUEUE_CAPACITY)

    def worker():
        while True:
            job_id = work_queue.get()
            if job_id is None:
                return
            with jobs_lock:
                job = jobs[job_id]
                job.status = "running"
                job.timings["started"] = time.time()
            try:
                entry = registry.get_loaded(job.model_name)
                if entry is None or entry.bundle is None:
                    raise RuntimeError(f"model {job.model_name!r} is not loaded")
                result = inpaint_image(entry.bundle, job.image, job.line, job.mask)
                png = _encode_png(result)
                with jobs_lock:
                    job.result_png = png
                    job.status = "done"
                    job.timings["finished"] = time.time()
            except Exception as exc:
                with jobs_lock:
                    job.status = "failed"
                    job.error = str(exc)
                    job.timings["finished"] = time.time()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        thread = threading.Thread(target=worker, daemon=True)
        thread.start()
        yield
        work_queue.put(None)
        thread.join(timeout=5)

    app = FastAPI(title="muralinpaint service", lifespan=lifespan)
    app.state.registry = registry

    @app.get("/healthz")
    def healthz():
        return {"ok": True, "loaded_models": registry.loaded_names()}

    @app.get("/api/models")
    def list_models():
        return {"models": registry.view()}

    @app.post("/api/models/{name}/load")
    def load_model(name: str):
        try:
            entry = registry.load(name)
        except KeyError:
            raise HTTPException(404, f"unknown model {name!r}")
        except CheckpointError as exc:
            raise HTTPException(500, f"cannot load model {name!r}: {exc}")
        return {
            "name": entry.name,
            "fingerprint": entry.fingerprint,
            "loaded": entry.loaded,
        }

    @app.post("/api/jobs")
    async def submit_job(
        image: UploadFile = File(...),
        mask: UploadFile = File(...),
        line: UploadFile = File(...),
        model_name: str = Form(...),
    ):
        try:
            image_arr = _decode_image(await image.read())
            mask_arr = _decode_mask(await mask.read())
            line_arr = _decode_line(await line.read())
        except Exception as exc:
            raise HTTPException(422, f"cannot decode inputs: {exc}")
        shapes = {
            "image": image_arr.shape[:2],
            "mask": mask_arr.shape,
            "line": line_arr.shape,
        }
        if len({s for s in shapes.values()}) != 1:
            raise HTTPException(422, f"input sizes disagree: {shapes}")
        if registry.get_loaded(model_name) is None:
            raise HTTPException(422, f"model {model_name!r} is not loaded")

        job = InpaintJob(
            id=uuid.uuid4().hex,
            model_name=model_name,
            image=image_arr,
            line=line_arr,
            mask=mask_arr,
            hole_ratio=float(mask_arr.mean()),
            timings={"submitted": time.time()},
        )
        with jobs_lock:
            jobs[job.id] = job
        try:
            work_queue.put_nowait(job.id)
        except queue.Full:
            with jobs_lock:
                del jobs[job.id]
            raise HTTPException(429, "job queue is full")
        return {"id": job.id}

    @app.get("/api/jobs/{job_id}")
    def job_status(job_id: str):
        with jobs_lock:
            job = jobs.get(job_id)
            if job is None:
                raise HTTPException(404, f"unknown job {job_id!r}")
            body = {"status": job.status, "hole_ratio": job.hole_ratio}
            if job.error:
                body["error"] = job.error
            return body

    @app.get("/api/jobs/{job_id}/result")
    def job_result(job_id: str):
        with jobs_lock:
            job = jobs.get(job_id)
            if job is None:
                raise HTTPException(404, f"unknown job {job_id!r}")
            if job.status == "failed":
                return JSONResponse({"error": job.error}, status_code=500)
            if job.status != "done":
                raise HTTPException(409, f"job is {job.status}")
            return Response(content=job.result_png, media_type="image/png")

    return app
