"""JSON-over-HTTP service exposing the compute pipeline.

Endpoints: GET /health, GET /datasets, POST /compute. Stateless per request
apart from an immutable dataset cache and a memo of converged spectra keyed
by (alpha rounded to 1e-12, mode count, tol). CORS is open so a local browser
explorer can talk to it directly.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from . import dataset as dataset_mod
from . import jacobi, pipeline, render
from .andrews import NonConvergedError
from .dataset import Dataset, DatasetError
from .jacobi import SpectralBasis
from .pipeline import ComputeRequest, DatasetNotFoundError, RequestError


@dataclass
class ServiceState:
    registry: dict
    allow_upload: bool = False
    datasets: dict = field(default_factory=dict)
    spectra: dict = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def dataset_for(self, entry: pipeline.DatasetEntry) -> Dataset:
        with self.lock:
            cached = self.datasets.get(entry.id)
        if cached is not None:
            return cached
        ds = dataset_mod.load_csv(entry.path, entry.label_spec)
        with self.lock:
            # concurrent loads of the same id produce equal values; last wins
            self.datasets[entry.id] = ds
        return ds

    def spectrum_for(self, req: ComputeRequest, d: int) -> Optional[SpectralBasis]:
        if req.mode != "ssqv":
            return None
        key = (round(req.alpha, 12), d, req.tol, req.size0, req.size_max)
        with self.lock:
            cached = self.spectra.get(key)
        if cached is not None:
            return cached
        spectrum = pipeline.converge_for(req, d)
        with self.lock:
            self.spectra[key] = spectrum
        return spectrum


def _resolve(state: ServiceState, req: ComputeRequest, inline_csv: Optional[str]) -> Dataset:
    if inline_csv is not None:
        if not state.allow_upload:
            raise RequestError("inline CSV uploads are disabled (start with --allow-upload)")
        import tempfile

        with tempfile.NamedTemporaryFile("w", suffix=".csv", delete=False) as fh:
            fh.write(inline_csv)
            tmp = fh.name
        try:
            return dataset_mod.load_csv(tmp, req.label)
        finally:
            Path(tmp).unlink(missing_ok=True)
    entry = state.registry.get(req.dataset)
    if entry is None:
        if state.allow_upload and Path(req.dataset).is_file():
            return dataset_mod.load_csv(req.dataset, req.label)
        raise DatasetNotFoundError(req.dataset)
    return state.dataset_for(entry)


def handle_compute(state: ServiceState, body: dict) -> tuple[int, dict]:
    """Status code and response document for a /compute body."""
    try:
        req, inline_csv = pipeline.request_from_json(body)
        ds = _resolve(state, req, inline_csv)
    except RequestError as exc:
        return 400, {"error": str(exc)}
    except DatasetNotFoundError as exc:
        return 404, {"error": f"unknown dataset: {exc.args[0]}"}
    except DatasetError as exc:
        return 400, {"error": str(exc)}
    try:
        spectrum = state.spectrum_for(req, ds.n_features)
        doc = pipeline.run_compute(req, ds, spectrum)
        return 200, doc
    except NonConvergedError as exc:
        return 422, {"error": str(exc), "report": pipeline.report_dict(exc.report)}
    except (jacobi.JacobiError, DatasetError, ValueError) as exc:
        return 422, {"error": str(exc)}


def dataset_listing(state: ServiceState) -> list:
    out = []
    for entry in state.registry.values():
        ds = state.dataset_for(entry)
        out.append(
            {
                "id": entry.id,
                "d": ds.n_features,
                "n": ds.n_points,
                "labels": ds.label_order(),
            }
        )
    return out


class Handler(BaseHTTPRequestHandler):
    server_version = "andrewsplot/0.1"
    protocol_version = "HTTP/1.1"

    @property
    def state(self) -> ServiceState:
        return self.server.state  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):
        if getattr(self.server, "verbose", False):
            super().log_message(fmt, *args)

    def _send(self, status: int, payload: bytes, content_type="application/json; charset=utf-8"):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, status: int, doc) -> None:
        try:
            body = render.dumps(doc)
        except ValueError:
            body = json.dumps({"error": "non-finite value in response"}).encode()
            status = 500
        self._send(status, body)

    def do_OPTIONS(self):
        self._send(204, b"")

    def do_GET(self):
        try:
            if self.path == "/health":
                self._send_json(200, {"status": "ok"})
            elif self.path == "/datasets":
                self._send_json(200, dataset_listing(self.state))
            else:
                self._send_json(404, {"error": f"no such endpoint: {self.path}"})
        except Exception as exc:  # pragma: no cover - defensive 500
            self._send_json(500, {"error": str(exc)})

    def do_POST(self):
        if self.path != "/compute":
            self._send_json(404, {"error": f"no such endpoint: {self.path}"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            raw = self.rfile.read(length)
            body = json.loads(raw.decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            self._send_json(400, {"error": "request body is not valid JSON"})
            return
        try:
            status, doc = handle_compute(self.state, body)
        except Exception as exc:  # pragma: no cover - defensive 500
            status, doc = 500, {"error": str(exc)}
        self._send_json(status, doc)


def make_server(
    port: int = 8080,
    datasets_dir=None,
    allow_upload: bool = False,
    host: str = "127.0.0.1",
    verbose: bool = False,
) -> ThreadingHTTPServer:
    state = ServiceState(pipeline.load_registry(datasets_dir), allow_upload)
    server = ThreadingHTTPServer((host, port), Handler)
    server.state = state  # type: ignore[attr-defined]
    server.verbose = verbose  # type: ignore[attr-defined]
    return server


def serve(port: int = 8080, datasets_dir=None, allow_upload: bool = False, verbose: bool = True):
    """Run the service until interrupted."""
    server = make_server(port, datasets_dir, allow_upload, verbose=verbose)
    host, actual_port = server.server_address[:2]
    print(f"listening on http://{host}:{actual_port} "
          f"({len(server.state.registry)} datasets, upload={'on' if allow_upload else 'off'})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
