"""Producing run files: replaying the pipeline over a topic set.

A run file lists ``topic_id rank score suggestion-text`` lines, preceded by
comment lines carrying the resolved configuration hash. Given the same
snapshot store and configuration, the bytes are identical across
invocations.
"""

from __future__ import annotations

import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import PipelineConfig
from .model import InitialQuery, ScoredSuggestion
from .scoring import MissingSnapshot, score_pipeline
from .snapshots import SnapshotStore


def build_topic_ranking(
    topic: InitialQuery, store: SnapshotStore, cfg: PipelineConfig
) -> list[ScoredSuggestion]:
    """Load the topic's snapshots for every active source and rank."""
    records, missing = store.load_present(topic.topic_id, cfg.sources)
    if missing:
        raise MissingSnapshot(topic.topic_id, missing[0])
    return score_pipeline(topic, records, cfg)


def generate_runs(
    topics,
    store: SnapshotStore,
    cfg: PipelineConfig,
    jobs: int = 1,
) -> tuple[dict, list[str]]:
    """Rank every topic; topics with missing snapshots are skipped.

    Returns (topic_id -> ranked suggestions, skipped topic ids). Topic
    ordering and scores do not depend on ``jobs``.
    """
    topics = sorted(topics, key=lambda t: t.topic_id)
    results: dict[str, list[ScoredSuggestion]] = {}
    skipped: list[str] = []

    def worker(topic):
        try:
            return topic.topic_id, build_topic_ranking(topic, store, cfg)
        except MissingSnapshot:
            return topic.topic_id, None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(worker, topics))
    else:
        outcomes = [worker(t) for t in topics]

    for topic_id, ranking in outcomes:
        if ranking is None:
            skipped.append(topic_id)
        else:
            results[topic_id] = ranking
    return results, skipped


def run_file_lines(results: dict, cfg: PipelineConfig) -> list[str]:
    lines = [f"# tasksugg run config_hash={cfg.config_hash()}"]
    for topic_id in sorted(results):
        for rank, suggestion in enumerate(results[topic_id], start=1):
            lines.append(f"{topic_id} {rank} {suggestion.score!r} {suggestion.text}")
    return lines


def write_text_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def write_run_file(path, results: dict, cfg: PipelineConfig) -> None:
    write_text_atomic(path, "\n".join(run_file_lines(results, cfg)) + "\n")
