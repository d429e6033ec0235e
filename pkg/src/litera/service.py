"""Minimal HTTP service exposing the pipeline to programmatic clients.

Endpoints:
  POST /v1/translate   {"text": ..., "variant"?: ..., "non_literal"?: bool}
                       -> {"literal": ..., "non_literal"?: ..., "trace_id": ...}
  GET  /v1/health      -> {"status": "ok"}
  GET  /v1/trace/{id}  -> stored trace JSON (in-memory ring buffer)

Each request runs one synchronous pipeline invocation. Traces live only in
the ring buffer; restarting the service clears them.
"""

from __future__ import annotations

import json
import threading
import uuid
from collections import OrderedDict
from dataclasses import replace
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .errors import InputError, LlmError, PipelineError
from .pipeline import Translator, Variant


class TraceStore:
    """Bounded, thread-safe id -> trace ring buffer (oldest evicted first)."""

    def __init__(self, capacity: int = 256):
        self._capacity = capacity
        self._traces: OrderedDict[str, dict] = OrderedDict()
        self._lock = threading.Lock()

    def put(self, trace: dict) -> str:
        trace_id = uuid.uuid4().hex
        with self._lock:
            self._traces[trace_id] = trace
            while len(self._traces) > self._capacity:
                self._traces.popitem(last=False)
        return trace_id

    def get(self, trace_id: str) -> dict | None:
        with self._lock:
            return self._traces.get(trace_id)

    def __len__(self) -> int:
        with self._lock:
            return len(self._traces)


class TranslationService:
    """Owns a Translator, a trace buffer, and the HTTP server lifecycle."""

    def __init__(self, translator: Translator, trace_capacity: int = 256):
        self._translator = translator
        self.traces = TraceStore(trace_capacity)
        self._draining = threading.Event()
        self._httpd: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    # -- request handling ---------------------------------------------------

    def handle_translate(self, body: bytes) -> tuple[int, dict]:
        if self._draining.is_set():
            return 503, {"error": "service is shutting down"}
        try:
            payload = json.loads(body.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            return 400, {"error": "request body is not valid JSON"}
        if not isinstance(payload, dict):
            return 400, {"error": "request body must be a JSON object"}

        text = payload.get("text")
        if not isinstance(text, str) or not text.strip():
            return 400, {"error": "field 'text' must be a non-empty string"}
        non_literal = payload.get("non_literal", False)
        if not isinstance(non_literal, bool):
            return 400, {"error": "field 'non_literal' must be a boolean"}
        translator = self._translator
        if "variant" in payload:
            try:
                variant = Variant(payload["variant"])
            except ValueError:
                valid = ", ".join(v.value for v in Variant)
                return 400, {"error": f"unknown variant; expected one of: {valid}"}
            translator = Translator(
                translator.client,
                translator.prompts,
                replace(translator.config, variant=variant),
            )
        if len(text) > translator.config.max_input_chars:
            return 422, {
                "error": f"text exceeds the {translator.config.max_input_chars}-character limit"
            }

        try:
            trace = translator.translate(text)
            result: dict = {"literal": trace.final}
            trace_dict = trace.to_dict()
            if non_literal:
                result["non_literal"] = translator.translate_non_literal(text, trace.final)
                trace_dict["non_literal"] = result["non_literal"]
        except PipelineError as exc:
            stage = exc.stage.value if exc.stage is not None else None
            return 502, {"error": str(exc), "stage": stage}
        except LlmError as exc:
            return 502, {"error": str(exc), "stage": "non_literal"}
        except InputError as exc:
            return 400, {"error": str(exc)}

        result["trace_id"] = self.traces.put(trace_dict)
        return 200, result

    def handle_get(self, path: str) -> tuple[int, dict]:
        if path == "/v1/health":
            return 200, {"status": "ok"}
        if path.startswith("/v1/trace/"):
            trace_id = path[len("/v1/trace/"):]
            trace = self.traces.get(trace_id)
            if trace is None:
                return 404, {"error": f"no trace {trace_id!r}"}
            return 200, trace
        return 404, {"error": "not found"}

    # -- server lifecycle ---------------------------------------------------

    def make_server(self, host: str, port: int) -> ThreadingHTTPServer:
        handler = _make_handler(self)
        httpd = ThreadingHTTPServer((host, port), handler)
        httpd.daemon_threads = True
        self._httpd = httpd
        return httpd

    def start(self, host: str = "127.0.0.1", port: int = 0) -> tuple[str, int]:
        """Serve in a background thread; returns the bound (host, port)."""
        httpd = self.make_server(host, port)
        self._thread = threading.Thread(target=httpd.serve_forever, daemon=True)
        self._thread.start()
        return httpd.server_address[0], httpd.server_address[1]

    def begin_drain(self) -> None:
        self._draining.set()

    def shutdown(self) -> None:
        self.begin_drain()
        if self._httpd is not None:
            self._httpd.shutdown()
            self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)


def _make_handler(service: TranslationService):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def _reply(self, status: int, payload: dict) -> None:
            data = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def do_POST(self):
            if self.path != "/v1/translate":
                self._reply(404, {"error": "not found"})
                return
            length = int(self.headers.get("Content-Length", 0))
            body = self.rfile.read(length) if length else b""
            status, payload = service.handle_translate(body)
            self._reply(status, payload)

        def do_GET(self):
            status, payload = service.handle_get(self.path)
            self._reply(status, payload)

        def log_message(self, format, *args):  # noqa: A002 - stdlib signature
            pass

    return Handler
