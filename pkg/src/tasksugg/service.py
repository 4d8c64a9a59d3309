"""HTTP service exposing ranked suggestions for interactive use.

Store-only mode (the default) answers purely from the snapshot store, so
responses are a deterministic function of (store, config, q, n); unseen
queries get a 404 with a machine-readable reason rather than a silently
empty list. Live mode falls back to the provider adapters for unseen
queries and answers 503 when they are unavailable.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from . import __version__
from .adapters import AdapterSettings, NetworkError, fetch
from .config import PipelineConfig
from .evaluation import parse_topics
from .model import InitialQuery, normalize_text, source_for_id
from .scoring import score_pipeline
from .snapshots import SnapshotStore


@dataclass(frozen=True)
class ServiceSettings:
    store_path: Path
    config: PipelineConfig = field(default_factory=PipelineConfig)
    topics_path: Path | None = None
    live: bool = False
    adapter_settings: AdapterSettings = field(default_factory=AdapterSettings)
    cors_origins: tuple[str, ...] = ("*",)
    default_n: int = 10


def _topic_index(topics_path: Path | None) -> dict[str, InitialQuery]:
    if topics_path is None:
        return {}
    return {normalize_text(t.text): t for t in parse_topics(topics_path)}


def _suggestion_payload(suggestions, n: int) -> list[dict]:
    payload = []
    for s in suggestions[:n]:
        sources = sorted({c.source_id for c in s.provenance if c.source_id})
        payload.append({"text": s.text, "score": s.score, "sources": sources})
    return payload


def create_app(settings: ServiceSettings) -> FastAPI:
    app = FastAPI(title="tasksugg", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(settings.cors_origins),
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    store = SnapshotStore(settings.store_path)
    topic_index = _topic_index(settings.topics_path)
    cfg = settings.config

    def rank_from_store(initial: InitialQuery):
        records, _missing = store.load_present(initial.topic_id, cfg.sources)
        if not records:
            return None
        present = tuple(r.source.source_id for r in records)
        return score_pipeline(initial, records, cfg.replace(sources=present))

    def rank_live(query: str):
        topic_id = "live-" + hashlib.sha1(query.encode("utf-8")).hexdigest()[:8]
        initial = InitialQuery(topic_id=topic_id, text=query)
        records = []
        for source_id in cfg.sources:
            records.append(
                fetch(
                    source_for_id(source_id),
                    initial,
                    cfg.k,
                    settings.adapter_settings,
                )
            )
        return score_pipeline(initial, records, cfg)

    @app.get("/suggest")
    def suggest(q: str = "", n: int | None = None):
        query = q.strip()
        if not query:
            raise HTTPException(status_code=400, detail="empty query")
        n_out = settings.default_n if n is None else n
        if n_out < 1:
            raise HTTPException(status_code=400, detail="n must be >= 1")

        initial = topic_index.get(normalize_text(query))
        ranked = rank_from_store(initial) if initial is not None else None
        if ranked is None:
            if not settings.live:
                raise HTTPException(
                    status_code=404,
                    detail={"reason": "no snapshots for query", "query": query},
                )
            try:
                ranked = rank_live(query)
            except NetworkError as exc:
                raise HTTPException(status_code=503, detail=str(exc)) from exc
        return {"query": query, "suggestions": _suggestion_payload(ranked, n_out)}

    @app.get("/health")
    def health():
        return {"status": "ok", "store_topics": len(store.topics())}

    return app


def serve(settings: ServiceSettings, host: str = "127.0.0.1", port: int = 8080) -> None:
    import uvicorn

    uvicorn.run(create_app(settings), host=host, port=port, log_level="info")
