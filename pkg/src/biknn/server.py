"""HTTP/JSON backend for the anomaly-space explorer.

Single-session, single-dataset desk tool: serves the fitted anomaly space,
reclassifies on demand (by count m or explicit thresholds), refits when
parameters change, and persists analyst marks next to the input file.
Every response carries the current model generation in the
X-Biknn-Generation header; refits are synchronous so clients never observe
mixed generations.
"""

from __future__ import annotations

import json
import mimetypes
import os
import threading
from dataclasses import dataclass, field, replace
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import scorer
from .classify import OutlierType, axis_thresholds, classify_by_thresholds, type_counts
from .dataset import Dataset
from .scorer import BiknnModel, BiknnParams

# params changeable through POST /api/params
_TUNABLE = ("k", "w1", "w2", "mu", "agg")


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


@dataclass
class SessionState:
    """Everything one explorer session holds between requests."""

    dataset: Dataset
    model: BiknnModel
    m: int
    thresholds: tuple[float, float] = (0.0, 0.0)
    manual_thresholds: bool = False
    types: list[OutlierType] = field(default_factory=list)
    generation: int = 1
    marked_ids: set[int] = field(default_factory=set)
    marks_path: Path | None = None

    def reclassify(self) -> None:
        if self.manual_thresholds:
            self.types = classify_by_thresholds(self.model.train_space, *self.thresholds)
        else:
            self.thresholds = axis_thresholds(self.model.train_space, self.m)
            self.types = classify_by_thresholds(self.model.train_space, *self.thresholds)

    def persist_marks(self) -> None:
        if self.marks_path is not None:
            doc = {"marked_ids": sorted(self.marked_ids)}
            self.marks_path.write_text(json.dumps(doc) + "\n", encoding="utf-8")

    def load_marks(self) -> None:
        if self.marks_path is not None and self.marks_path.exists():
            doc = json.loads(self.marks_path.read_text(encoding="utf-8"))
            self.marked_ids = set(int(i) for i in doc.get("marked_ids", []))


def _require(body: dict, key: str, kind) -> float:
    if key not in body:
        raise ApiError(400, f"missing field {key!r}")
    try:
        return kind(body[key])
    except (TypeError, ValueError):
        raise ApiError(400, f"field {key!r} must be a {kind.__name__}") from None


class _Handler(BaseHTTPRequestHandler):
    server_version = "biknn"

    # ---- plumbing -------------------------------------------------------

    @property
    def state(self) -> SessionState:
        return self.server.state  # type: ignore[attr-defined]

    @property
    def lock(self) -> threading.Lock:
        return self.server.state_lock  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):  # quiet by default
        if os.environ.get("BIKNN_HTTP_LOG"):
            super().log_message(fmt, *args)

    def _send_json(self, payload, status: int = 200, generation: int | None = None) -> None:
        # the generation header must describe the payload, so callers capture
        # it inside the state lock; falling back to the live value is only
        # safe for responses that carry no model-derived data
        if generation is None:
            with self.lock:
                generation = self.state.generation
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("X-Biknn-Generation", str(generation))
        self.end_headers()
        self.wfile.write(body)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            doc = json.loads(raw.decode("utf-8")) if raw else {}
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise ApiError(400, "request body is not valid JSON") from None
        if not isinstance(doc, dict):
            raise ApiError(400, "request body must be a JSON object")
        return doc

    # ---- dispatch -------------------------------------------------------

    def do_GET(self):
        try:
            path = self.path.split("?", 1)[0]
            if path == "/api/space":
                self._get_space()
            elif path == "/api/scores":
                self._get_scores()
            elif path == "/api/grid":
                self._get_grid()
            elif path == "/api/original":
                self._get_original()
            elif path == "/api/marks":
                with self.lock:
                    payload = {"marked_ids": sorted(self.state.marked_ids)}
                    gen = self.state.generation
                self._send_json(payload, generation=gen)
            else:
                self._serve_static(path)
        except ApiError as exc:
            self._send_json({"error": str(exc)}, exc.status)
        except BrokenPipeError:
            pass

    def do_POST(self):
        try:
            path = self.path.split("?", 1)[0]
            if path == "/api/classify":
                self._post_classify()
            elif path == "/api/params":
                self._post_params()
            elif path == "/api/mark":
                self._post_mark()
            else:
                raise ApiError(404, f"no such endpoint: {path}")
        except ApiError as exc:
            self._send_json({"error": str(exc)}, exc.status)
        except BrokenPipeError:
            pass

    # ---- read endpoints ---------------------------------------------------

    def _get_space(self):
        with self.lock:
            st = self.state
            space = st.model.train_space
            payload = {
                "points": [
                    {"id": i, "k_e": float(space[i, 0]), "k_p": float(space[i, 1])}
                    for i in range(len(space))
                ],
                "thresholds": {"t_e": st.thresholds[0], "t_p": st.thresholds[1]},
                "types": [t.value for t in st.types],
            }
            gen = st.generation
        self._send_json(payload, generation=gen)

    def _get_scores(self):
        with self.lock:
            scores = self.state.model.score_train()
            gen = self.state.generation
        self._send_json({"scores": [float(s) for s in scores]}, generation=gen)

    def _get_grid(self):
        query = self.path.split("?", 1)[1] if "?" in self.path else ""
        resolution = 100
        for part in query.split("&"):
            if part.startswith("resolution="):
                try:
                    resolution = int(part.split("=", 1)[1])
                except ValueError:
                    raise ApiError(400, "resolution must be an integer") from None
        with self.lock:
            st = self.state
            if st.dataset.d != 2:
                raise ApiError(404, "grid is only available for 2D datasets")
            if not 2 <= resolution <= 1000:
                raise ApiError(400, "resolution must be in [2, 1000]")
            lo = st.dataset.features.min(axis=0)
            hi = st.dataset.features.max(axis=0)
            pad = 0.1 * (hi - lo)
            mins, maxs = lo - pad, hi + pad
            grid = st.model.score_grid(mins, maxs, resolution)
            gen = st.generation
        self._send_json(
            {
                "xmin": float(mins[0]),
                "xmax": float(maxs[0]),
                "ymin": float(mins[1]),
                "ymax": float(maxs[1]),
                "resolution": resolution,
                "values": [[float(v) for v in row] for row in grid],
            },
            generation=gen,
        )

    def _get_original(self):
        with self.lock:
            ds = self.state.dataset
            if ds.d != 2:
                raise ApiError(404, "original-space view is only available for 2D datasets")
            points = [
                {"id": i, "x": float(ds.features[i, 0]), "y": float(ds.features[i, 1])}
                for i in range(ds.n)
            ]
            gen = self.state.generation
        self._send_json({"points": points}, generation=gen)

    # ---- mutations --------------------------------------------------------

    def _post_classify(self):
        body = self._read_body()
        with self.lock:
            st = self.state
            if "m" in body:
                m = _require(body, "m", int)
                if not 1 <= m < st.model.n_train:
                    raise ApiError(400, f"m must be in [1, {st.model.n_train - 1}]")
                st.m = m
                st.manual_thresholds = False
            elif "t_e" in body or "t_p" in body:
                t_e = _require(body, "t_e", float)
                t_p = _require(body, "t_p", float)
                st.thresholds = (t_e, t_p)
                st.manual_thresholds = True
            else:
                raise ApiError(400, "body must provide either {m} or {t_e, t_p}")
            st.reclassify()
            payload = {
                "types": [t.value for t in st.types],
                "counts": type_counts(st.types),
                "thresholds": {"t_e": st.thresholds[0], "t_p": st.thresholds[1]},
            }
            gen = st.generation
        self._send_json(payload, generation=gen)

    def _post_params(self):
        body = self._read_body()
        unknown = set(body) - set(_TUNABLE)
        if unknown:
            raise ApiError(400, f"unknown parameters: {sorted(unknown)}")
        if not body:
            raise ApiError(400, f"no parameters given; tunable: {list(_TUNABLE)}")
        with self.lock:
            st = self.state
            try:
                new_params = replace(st.model.params, **body)
                new_model = scorer.fit(st.dataset, new_params)
            except (ValueError, TypeError) as exc:
                raise ApiError(409, f"refit failed, keeping generation {st.generation}: {exc}") from None
            st.model = new_model
            st.generation += 1
            st.reclassify()
            payload = {"generation": st.generation}
            gen = st.generation
        self._send_json(payload, generation=gen)

    def _post_mark(self):
        body = self._read_body()
        point_id = _require(body, "id", int)
        marked = body.get("marked")
        if not isinstance(marked, bool):
            raise ApiError(400, "field 'marked' must be true or false")
        with self.lock:
            st = self.state
            if not 0 <= point_id < st.dataset.n:
                raise ApiError(400, f"id must be in [0, {st.dataset.n - 1}]")
            if marked:
                st.marked_ids.add(point_id)
            else:
                st.marked_ids.discard(point_id)
            st.persist_marks()
            payload = {"marked_ids": sorted(st.marked_ids)}
            gen = st.generation
        self._send_json(payload, generation=gen)

    # ---- static frontend ----------------------------------------------------

    def _serve_static(self, path: str):
        root = self.server.static_dir  # type: ignore[attr-defined]
        if path in ("", "/"):
            path = "/index.html"
        if root is not None:
            target = (root / path.lstrip("/")).resolve()
            if str(target).startswith(str(root.resolve())) and target.is_file():
                body = target.read_bytes()
                ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
                self.send_response(200)
                self.send_header("Content-Type", ctype)
                self.send_header("Content-Length", str(len(body)))
                self.send_header("X-Biknn-Generation", str(self.state.generation))
                self.end_headers()
                self.wfile.write(body)
                return
        if path == "/index.html":
            body = _FALLBACK_PAGE.encode("utf-8")
            self.send_response(200)
            self.send_header("Content-Type", "text/html; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("X-Biknn-Generation", str(self.state.generation))
            self.end_headers()
            self.wfile.write(body)
            return
        raise ApiError(404, f"not found: {path}")


_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>biknn backend</title></head>
<body><h1>biknn explorer backend</h1>
<p>The API is up. Build the frontend (see README) to get the interactive
explorer, or query <code>/api/space</code> directly.</p></body></html>
"""


class BiknnServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, addr, state: SessionState, static_dir: Path | None):
        self.state = state
        self.state_lock = threading.Lock()
        self.static_dir = static_dir
        super().__init__(addr, _Handler)

    @property
    def port(self) -> int:
        return self.server_address[1]


def _default_static_dir() -> Path | None:
    env = os.environ.get("BIKNN_FRONTEND")
    candidates = [Path(env)] if env else []
    candidates.append(Path.cwd() / "frontend")
    for cand in candidates:
        if (cand / "index.html").is_file():
            return cand
    return None


def create_server(
    ds: Dataset,
    params: BiknnParams | None = None,
    port: int = 0,
    marks_path: Path | None = None,
    n_outliers: int | None = None,
    static_dir: Path | None = None,
) -> BiknnServer:
    """Fit the initial model and return a ready (not yet running) server.

    port=0 lets the OS pick a free port (used by tests); callers run
    serve_forever() themselves.
    """
    params = params or BiknnParams()
    model = scorer.fit(ds, params)
    m = n_outliers if n_outliers is not None else min(10, ds.n - 1)
    if not 1 <= m < ds.n:
        raise ValueError(f"initial n_outliers={m} out of range")
    state = SessionState(dataset=ds, model=model, m=m, marks_path=marks_path)
    state.load_marks()
    state.reclassify()
    return BiknnServer(("127.0.0.1", port), state, static_dir or _default_static_dir())
