"""HTTP search service.

Accepts a sketched wireframe as JSON, renders and encodes it with the
loaded model, searches the loaded latent index, and serves corpus screens
as PNG wireframes and JSON metadata. State (model, index, manifest) is
loaded once and never mutated by requests.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from .autoencoder import WaeModel, encode
from .index import LatentIndex, knn, load_index
from .model import (
    Bounds,
    ComponentType,
    UIComponent,
    UIScreen,
    read_manifest,
    screen_to_dict,
    validate_screen,
)
from .wirify import RepresentationMode, render, to_png_bytes

MAX_K = 50


class BoundsBody(BaseModel):
    left: int
    top: int
    right: int
    bottom: int


class ComponentBody(BaseModel):
    ctype: str
    bounds: BoundsBody


class ExtentBody(BaseModel):
    width: int = Field(gt=0)
    height: int = Field(gt=0)


class SearchRequest(BaseModel):
    extent: ExtentBody
    components: list[ComponentBody] = Field(default_factory=list)
    k: int = Field(default=10, ge=1, le=MAX_K)
    mode: str = "Color"


@dataclass
class ServiceState:
    model: WaeModel
    index: LatentIndex
    screens: dict[str, UIScreen]
    mode: RepresentationMode


def _request_to_screen(body: SearchRequest) -> UIScreen:
    components = []
    for i, comp in enumerate(body.components):
        try:
            ctype = ComponentType[comp.ctype]
        except KeyError:
            raise ValueError(f"components[{i}].ctype: unknown component type {comp.ctype!r}")
        b = comp.bounds
        components.append(UIComponent(ctype, Bounds(b.left, b.top, b.right, b.bottom)))
    screen = UIScreen(
        id="query",
        width=body.extent.width,
        height=body.extent.height,
        components=tuple(components),
    )
    violations = validate_screen(screen)
    if violations:
        first = violations[0]
        raise ValueError(f"components[{first.component_index}]: {first.rule}")
    return screen


def create_app(state: ServiceState | None = None) -> FastAPI:
    app = FastAPI(title="wireframe design search")
    app.state.service = state

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "malformed request", "details": exc.errors()},
        )

    def service() -> ServiceState:
        svc = app.state.service
        if svc is None:
            raise _NotLoaded()
        return svc

    class _NotLoaded(Exception):
        pass

    @app.exception_handler(_NotLoaded)
    async def not_loaded_handler(request: Request, exc: _NotLoaded):
        return JSONResponse(status_code=503, content={"error": "model/index not loaded"})

    @app.post("/api/search")
    def search(body: SearchRequest):
        svc = service()
        started = time.perf_counter()
        try:
            screen = _request_to_screen(body)
            mode = RepresentationMode[body.mode]
        except (ValueError, KeyError) as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})
        size = svc.index.raster_size
        latent = encode(svc.model, render(screen, mode, size))
        hits = knn(svc.index, latent, body.k)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        return {
            "results": [
                {
                    "screen_id": h.screen_id,
                    "distance": h.distance,
                    "rank": h.rank,
                    "wireframe_url": f"/api/screens/{h.screen_id}/wireframe",
                    "meta_url": f"/api/screens/{h.screen_id}/meta",
                }
                for h in hits
            ],
            "model_fingerprint": svc.model.fingerprint().hex(),
            "elapsed_ms": elapsed_ms,
        }

    @app.get("/api/screens/{screen_id}/wireframe")
    def wireframe(screen_id: str):
        svc = service()
        screen = svc.screens.get(screen_id)
        if screen is None:
            return JSONResponse(status_code=404, content={"error": f"unknown screen {screen_id!r}"})
        image = render(screen, svc.mode, (screen.width // 4, screen.height // 4))
        return Response(content=to_png_bytes(image), media_type="image/png")

    @app.get("/api/screens/{screen_id}/meta")
    def meta(screen_id: str):
        svc = service()
        screen = svc.screens.get(screen_id)
        if screen is None:
            return JSONResponse(status_code=404, content={"error": f"unknown screen {screen_id!r}"})
        return Response(
            content=json.dumps(screen_to_dict(screen), sort_keys=True),
            media_type="application/json",
        )

    @app.get("/api/health")
    def health():
        svc = service()
        return {
            "status": "ok",
            "index_size": len(svc.index),
            "model_fingerprint": svc.model.fingerprint().hex(),
            "mode": svc.mode.value,
        }

    return app


def load_state(model_path, index_path, manifest_path) -> ServiceState:
    model = WaeModel.load(model_path)
    index = load_index(index_path)
    if index.model_checksum != model.fingerprint():
        raise ValueError("index was built with a different model (fingerprint mismatch)")
    screens = {s.id: s for s in read_manifest(manifest_path)}
    missing = [sid for sid in index.ids if sid not in screens]
    if missing:
        raise ValueError(f"manifest is missing indexed screens, e.g. {missing[:3]}")
    return ServiceState(model=model, index=index, screens=screens, mode=index.mode)


def serve(model_path, index_path, manifest_path, host="127.0.0.1", port=8000):
    import uvicorn

    state = load_state(model_path, index_path, manifest_path)
    app = create_app(state)
    uvicorn.run(app, host=host, port=port, log_level="warning")
