"""HTTP/JSON service: sessions, publishing, lineage, sweeps, labels, metrics.

Sessions are held in memory (one writer at a time each, evicted after a day
of inactivity) while published records go to the append-only store. All image
bytes are rendered on demand from genomes, so every URL is a pure function of
the stored state and the query parameters.
"""

from __future__ import annotations

import contextlib
import threading
import time
from pathlib import Path
from typing import Optional
from uuid import uuid4

import numpy as np
from fastapi import Body, FastAPI, HTTPException, Query, Response
from fastapi.staticfiles import StaticFiles

from . import __version__
from .errors import (DisabledConnection, EmptySelection, EmptyTitle, Infeasible,
                     InvalidGenome, InvalidSlot, PaletteMismatch, Saturated,
                     StudioError, UnknownConnection, UnknownImage, UnknownNode)
from .evolution import (DEFAULT_POPULATION, MAX_POPULATION, MIN_POPULATION,
                        MutationConfig, Session, branch, next_generation,
                        scratch_population)
from .genome import PALETTES, genome_to_document
from .labels import LabelStore, annotate_export, load_labels, normalize_color, save_labels
from .nullmodels import residual_scores, resolve_parent
from .render import render, to_png
from .store import Store
from .sweep import DEFAULT_THRESHOLD, SweepSpec, sweep
from .corpus import build_corpus, corpus_report
from .graphs import genome_node_order, genome_to_graph, optimal_partition

SESSION_IDLE_SECONDS = 24 * 3600
_NOT_FOUND = (UnknownImage, UnknownNode, UnknownConnection)
_BAD_REQUEST = (EmptySelection, InvalidSlot, EmptyTitle, PaletteMismatch,
                DisabledConnection, InvalidGenome, ValueError, IndexError)
_CONFLICT = (Infeasible, Saturated)


class SessionState:
    """A live session plus its server-side bookkeeping."""

    def __init__(self, session: Session, rng: np.random.Generator,
                 config: MutationConfig):
        self.session = session
        self.rng = rng
        self.config = config
        self.selected: set[int] = set()
        self.lock = threading.Lock()
        self.last_access = time.time()


class Studio:
    """Shared state behind the HTTP API."""

    def __init__(self, store: Store, default_population: int = DEFAULT_POPULATION):
        self.store = store
        self.default_population = default_population
        self.sessions: dict[str, SessionState] = {}
        self._sessions_lock = threading.Lock()

    def _evict_idle(self) -> None:
        horizon = time.time() - SESSION_IDLE_SECONDS
        stale = [sid for sid, st in self.sessions.items() if st.last_access < horizon]
        for sid in stale:
            self.sessions.pop(sid, None)

    def create_session(self, origin: str, palette: Optional[str],
                       seed: Optional[int], population: Optional[int]) -> SessionState:
        n = population if population is not None else self.default_population
        if not MIN_POPULATION <= n <= MAX_POPULATION:
            raise ValueError(f"population must be {MIN_POPULATION}..{MAX_POPULATION}")
        rng = np.random.default_rng(seed)
        config = MutationConfig()
        if origin == "scratch":
            if palette not in PALETTES:
                raise ValueError(f"palette must be one of {PALETTES}")
            pop = scratch_population(palette, n, self.store.registry, rng)
            session = Session(id=uuid4().hex[:12], population=pop, origin=None,
                              generation=0, registry=self.store.registry, rng_seed=seed)
        else:
            record = self.store.get(origin)
            if palette is not None and palette != record.genome.palette:
                raise PaletteMismatch(
                    f"image {origin} is {record.genome.palette}, not {palette}")
            pop = branch(record.genome, self.store.registry, config, rng, n)
            session = Session(id=uuid4().hex[:12], population=pop, origin=origin,
                              generation=0, registry=self.store.registry, rng_seed=seed)
        state = SessionState(session, rng, config)
        with self._sessions_lock:
            self._evict_idle()
            self.sessions[session.id] = state
        return state

    def get_session(self, session_id: str) -> SessionState:
        with self._sessions_lock:
            self._evict_idle()
            state = self.sessions.get(session_id)
        if state is None:
            raise UnknownImage(f"no live session {session_id!r}")
        state.last_access = time.time()
        return state


def _http_error(exc: Exception) -> HTTPException:
    if isinstance(exc, _NOT_FOUND):
        return HTTPException(status_code=404, detail=str(exc))
    if isinstance(exc, _CONFLICT):
        return HTTPException(status_code=409, detail=str(exc))
    if isinstance(exc, _BAD_REQUEST):
        return HTTPException(status_code=400, detail=str(exc))
    raise exc


def create_app(store_path, ui_dir: Optional[str] = None,
               default_population: int = DEFAULT_POPULATION) -> FastAPI:
    store = Store(store_path)
    studio = Studio(store, default_population=default_population)

    @contextlib.asynccontextmanager
    async def lifespan(_app):
        yield
        store.flush()

    app = FastAPI(title="cppnstudio", version=__version__, lifespan=lifespan)
    app.state.studio = studio

    def guard(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except StudioError as exc:
            raise _http_error(exc) from exc
        except (ValueError, IndexError) as exc:
            raise _http_error(exc) from exc

    # -- service --------------------------------------------------------------

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__,
                "records": len(store.records)}

    # -- sessions -------------------------------------------------------------

    @app.post("/sessions")
    def create_session(body: dict = Body(...)):
        origin = body.get("from", "scratch")
        state = guard(studio.create_session, str(origin), body.get("palette"),
                      body.get("seed"), body.get("population"))
        return {"session_id": state.session.id}

    def _population_payload(state: SessionState, size: int) -> dict:
        session = state.session
        return {
            "session_id": session.id,
            "generation": session.generation,
            "origin": session.origin,
            "palette": session.population[0].palette,
            "population_size": len(session.population),
            "image_size": size,
            "slots": [
                {"slot": i,
                 "selected": i in state.selected,
                 "url": f"/sessions/{session.id}/images/{i}.png?size={size}"}
                for i in range(len(session.population))
            ],
        }

    @app.get("/sessions/{session_id}/population")
    def population(session_id: str, size: int = Query(default=256, ge=1, le=1024)):
        state = guard(studio.get_session, session_id)
        return _population_payload(state, size)

    @app.get("/sessions/{session_id}/images/{slot}.png")
    def slot_image(session_id: str, slot: int,
                   size: int = Query(default=256, ge=1, le=1024)):
        state = guard(studio.get_session, session_id)
        if not 0 <= slot < len(state.session.population):
            raise HTTPException(status_code=404, detail=f"no slot {slot}")
        png = to_png(render(state.session.population[slot], size, size))
        return Response(content=png, media_type="image/png")

    @app.post("/sessions/{session_id}/select", status_code=204)
    def select(session_id: str, body: dict = Body(...)):
        state = guard(studio.get_session, session_id)
        slots = body.get("slots", [])
        with state.lock:
            n = len(state.session.population)
            for slot in slots:
                if not 0 <= int(slot) < n:
                    raise _http_error(IndexError(f"slot {slot} outside population of {n}"))
            state.selected = {int(s) for s in slots}
        return Response(status_code=204)

    @app.post("/sessions/{session_id}/next")
    def step(session_id: str):
        state = guard(studio.get_session, session_id)
        with state.lock:
            selected = sorted(state.selected)
            state.session = guard(next_generation, state.session, selected,
                                  state.config, state.rng)
            state.selected = set()
            return {"generation": state.session.generation}

    @app.post("/sessions/{session_id}/publish")
    def publish(session_id: str, body: dict = Body(...)):
        state = guard(studio.get_session, session_id)
        with state.lock:
            slot = body.get("slot")
            if not isinstance(slot, int) or not 0 <= slot < len(state.session.population):
                raise _http_error(InvalidSlot(f"slot {slot!r} is not a population slot"))
            record = guard(store.add_record,
                           state.session.population[slot],
                           state.session.origin,
                           str(body.get("title", "")),
                           str(body.get("author", "")),
                           state.config)
            return record.to_document()

    # -- published images -----------------------------------------------------

    # the .png route must precede the bare {image_id} route: starlette
    # matches in registration order and the generic pattern would swallow
    # "1.png" as an image id
    @app.get("/images/{image_id}.png")
    def image_png(image_id: str, size: int = Query(default=256, ge=1, le=1024)):
        record = guard(store.get, image_id)
        return Response(content=to_png(render(record.genome, size, size)),
                        media_type="image/png")

    @app.get("/images/{image_id}")
    def image_record(image_id: str):
        return guard(store.get, image_id).to_document()

    @app.get("/images/{image_id}/genome")
    def image_genome(image_id: str):
        record = guard(store.get, image_id)
        return genome_to_document(record.genome, parent_id=record.parent_id,
                                  title=record.title, author=record.author)

    @app.get("/images/{image_id}/nodes/{node}.png")
    def node_png(image_id: str, node: int,
                 size: int = Query(default=256, ge=1, le=1024)):
        from .render import render_node
        record = guard(store.get, image_id)
        return Response(content=to_png(guard(render_node, record.genome, node, size, size)),
                        media_type="image/png")

    @app.get("/images/{image_id}/lineage")
    def lineage(image_id: str):
        return guard(store.lineage, image_id).to_document()

    # -- sweeps ---------------------------------------------------------------

    @app.get("/images/{image_id}/sweep")
    def sweep_view(image_id: str, connection: int,
                   lo: float = -3.0, hi: float = 3.0, step: float = 0.1,
                   size: int = Query(default=256, ge=1, le=1024),
                   threshold: float = DEFAULT_THRESHOLD):
        record = guard(store.get, image_id)
        spec = guard(SweepSpec, connection=connection, lo=lo, hi=hi, step=step,
                     image_size=(size, size))
        result = guard(sweep, record.genome, spec, threshold)
        base = (f"/images/{image_id}/sweep/frame.png?connection={connection}"
                f"&size={size}")
        return {
            "image_id": image_id,
            "connection": connection,
            "baseline_weight": result.baseline_weight,
            "baseline_url": f"/images/{image_id}.png?size={size}",
            "lo": lo, "hi": hi, "step": step, "size": size,
            "frames": [{"weight": w, "url": f"{base}&weight={w!r}"}
                       for w, _ in result.frames],
            "impact": result.impact.summary(),
        }

    @app.get("/images/{image_id}/sweep/frame.png")
    def sweep_frame(image_id: str, connection: int, weight: float,
                    size: int = Query(default=256, ge=1, le=1024)):
        record = guard(store.get, image_id)
        genome = record.genome
        conn = genome.connection_by_innovation.get(connection)
        if conn is None:
            raise HTTPException(status_code=404, detail=f"no connection {connection}")
        variant = genome.with_connection_weight(connection, weight)
        return Response(content=to_png(render(variant, size, size)),
                        media_type="image/png")

    # -- labels and annotation ------------------------------------------------

    def _load_labels(image_id: str) -> LabelStore:
        path = store.labels_path(image_id)
        if path.exists():
            return load_labels(path)
        return LabelStore(genome_id=image_id)

    @app.put("/images/{image_id}/labels")
    def put_labels(image_id: str, body: dict = Body(...)):
        record = guard(store.get, image_id)
        labels = body.get("labels", {})
        known = record.genome.connection_by_innovation
        parsed = {}
        for key, value in labels.items():
            innovation = int(key)
            if innovation not in known:
                raise _http_error(UnknownConnection(f"no connection {innovation}"))
            parsed[str(innovation)] = {"name": str(value["name"]),
                                       "color": guard(normalize_color, value["color"])}
        label_store = LabelStore.from_document({"genome_id": image_id, "labels": parsed})
        save_labels(label_store, store.labels_path(image_id))
        return label_store.to_document()

    @app.get("/images/{image_id}/labels")
    def get_labels(image_id: str):
        guard(store.get, image_id)
        return _load_labels(image_id).to_document()

    @app.get("/images/{image_id}/annotated.svg")
    def annotated(image_id: str, modules: bool = False):
        record = guard(store.get, image_id)
        partition = None
        if modules:
            graph = genome_to_graph(record.genome)
            assignment, _ = guard(optimal_partition, graph)
            order = genome_node_order(record.genome)
            partition = {order[i]: module for i, module in enumerate(assignment)}
        export = annotate_export(record.genome, _load_labels(image_id), partition)
        return Response(content=export.svg, media_type="image/svg+xml")

    @app.get("/images/{image_id}/decomposition")
    def image_decomposition(image_id: str):
        guard(store.get, image_id)
        export = annotate_export(guard(store.get, image_id).genome, _load_labels(image_id))
        return export.decomposition

    # -- analysis -------------------------------------------------------------

    @app.get("/images/{image_id}/metrics")
    def metrics(image_id: str, nulls: int = Query(default=10, ge=1, le=100),
                seed: Optional[int] = None):
        record = guard(store.get, image_id)
        parent = None
        if record.parent_id is not None:
            parent = store.get(record.parent_id).genome
        # analysis runs against a throwaway copy so null-model growth does not
        # pollute the persistent markings
        registry = store.registry.clone()
        parent = resolve_parent(record.genome, parent, registry)
        return guard(residual_scores, record.genome, parent,
                     nulls=nulls, seed=seed, registry=registry)

    @app.get("/corpus/report")
    def corpus(nulls: int = Query(default=10, ge=1, le=100),
               seed: Optional[int] = None,
               bins: int = Query(default=20, ge=1, le=200)):
        documents = store.genome_documents()
        if not documents:
            raise HTTPException(status_code=400, detail="store has no published images")
        records, skipped = guard(build_corpus, documents, nulls=nulls, seed=seed)
        rng = np.random.default_rng(None if seed is None else [seed, len(records)])
        report = guard(corpus_report, records, bins=bins, rng=rng)
        report["skipped_genomes"] = skipped
        return report

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
