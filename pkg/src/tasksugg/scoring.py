"""Mixture scoring: combine source importance, document importance,
keyphrase relevance, and generation probability into one ranked list.

A suggestion's score is the sum over every (source, document, keyphrase,
rule) path of the product of the four component probabilities. Merging is
associative and commutative, so per-source partials can be computed in any
order (or in parallel) and the result is identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import PipelineConfig
from .extraction import extract_for_document
from .generation import generate
from .model import (
    Contribution,
    InitialQuery,
    ScoredSuggestion,
    SOURCES,
    merge_contributions,
    normalize_text,
)
from .snapshots import SnapshotRecord


class InvalidRank(ValueError):
    pass


class MissingCalibration(ValueError):
    pass


class AllZeroCalibration(ValueError):
    pass


class MissingSnapshot(LookupError):
    def __init__(self, topic_id: str, source_id: str) -> None:
        super().__init__(f"no snapshot for ({topic_id}, {source_id})")
        self.topic_id = topic_id
        self.source_id = source_id


@dataclass(frozen=True)
class SourceWeights:
    """Resolved per-source mixture weights; inactive sources weigh 0."""

    strategy: str
    weights: dict

    def weight(self, source_id: str) -> float:
        return self.weights.get(source_id, 0.0)


def doc_weight(kind: str, rank: int, n_docs: int, k: int = 10) -> float:
    """Importance of the document at ``rank`` within a response of
    ``n_docs`` (out of a nominal top-``k``).

    uniform: 1/n. rank_decay: (k - rank + 1) renormalized over the n ranks
    actually returned, which equals (k - rank + 1) / (k(k+1)/2) for a full
    response. Short responses renormalize rather than leak mass.
    """
    if n_docs < 1 or n_docs > k:
        raise InvalidRank(f"n_docs={n_docs} outside [1, k={k}]")
    if not 1 <= rank <= n_docs:
        raise InvalidRank(f"rank={rank} outside [1, {n_docs}]")
    if kind == "uniform":
        return 1.0 / n_docs
    if kind == "rank_decay":
        denominator = sum(k - i + 1 for i in range(1, n_docs + 1))
        return (k - rank + 1) / denominator
    raise ValueError(f"unknown document importance kind {kind!r}")


def source_weights(strategy: str, active, scores=None) -> SourceWeights:
    """Resolve the per-source weight map for the active sources.

    ``scores`` supplies calibration values: per-source for
    individual_proportional and explicit, per-source-type for
    source_type_proportional (type mass is shared equally within the type).
    """
    ids = sorted(set(active))
    if not ids:
        raise ValueError("no active sources")
    for sid in ids:
        if sid not in SOURCES:
            raise ValueError(f"unknown source id {sid!r}")

    if strategy == "uniform":
        share = 1.0 / len(ids)
        return SourceWeights(strategy, {sid: share for sid in ids})

    scores = scores or {}
    if strategy in ("individual_proportional", "explicit"):
        per_source = {}
        for sid in ids:
            if sid in scores:
                per_source[sid] = float(scores[sid])
            elif strategy == "explicit":
                per_source[sid] = 0.0
            else:
                raise MissingCalibration(f"no calibration score for {sid!r}")
        if any(v < 0 for v in per_source.values()):
            raise ValueError("calibration scores must be >= 0")
        total = math.fsum(per_source.values())
        if total == 0:
            raise AllZeroCalibration("every calibration score is 0")
        return SourceWeights(strategy, {s: v / total for s, v in per_source.items()})

    if strategy == "source_type_proportional":
        by_type: dict[str, list[str]] = {}
        for sid in ids:
            by_type.setdefault(SOURCES[sid].source_type, []).append(sid)
        type_scores = {}
        for stype in sorted(by_type):
            if stype not in scores:
                raise MissingCalibration(f"no calibration score for type {stype!r}")
            type_scores[stype] = float(scores[stype])
        if any(v < 0 for v in type_scores.values()):
            raise ValueError("calibration scores must be >= 0")
        total = math.fsum(type_scores.values())
        if total == 0:
            raise AllZeroCalibration("every calibration score is 0")
        weights = {}
        for stype, members in by_type.items():
            share = (type_scores[stype] / total) / len(members)
            for sid in members:
                weights[sid] = share
        return SourceWeights(strategy, weights)

    raise ValueError(f"unknown source weight strategy {strategy!r}")


def weights_for_config(cfg: PipelineConfig) -> SourceWeights:
    return source_weights(cfg.source_weight_strategy, cfg.sources, cfg.calibration)


def ranking_key(suggestion: ScoredSuggestion):
    """Total order: score descending, then shorter text, then lexicographic."""
    return (-suggestion.score, len(suggestion.text), suggestion.text)


def rank_suggestions(suggestions) -> list[ScoredSuggestion]:
    return sorted(suggestions, key=ranking_key)


def aggregate_suggestions(
    initial: InitialQuery, snapshots, cfg: PipelineConfig
) -> list[ScoredSuggestion]:
    """Sum every scoring path into merged suggestions, unranked and uncut.

    Requires a snapshot for every active source (empty responses are fine;
    their weight share simply contributes nothing, so sibling sources are
    not inflated).
    """
    by_source = {}
    for snap in snapshots:
        if snap.topic_id != initial.topic_id:
            raise ValueError(
                f"snapshot topic {snap.topic_id!r} does not match query topic "
                f"{initial.topic_id!r}"
            )
        by_source[snap.source.source_id] = snap

    weights = weights_for_config(cfg)
    items = []
    for source_id in sorted(cfg.sources):
        if source_id not in by_source:
            raise MissingSnapshot(initial.topic_id, source_id)
        share = weights.weight(source_id)
        snap = by_source[source_id]
        documents = snap.documents[: cfg.k]
        if share == 0.0 or not documents:
            continue
        n_docs = len(documents)
        source_type = snap.source.source_type
        mode = cfg.mode_for(source_type)
        for doc in documents:
            importance = doc_weight(cfg.doc_importance, doc.rank, n_docs, cfg.k)
            for keyphrase in extract_for_document(doc, cfg.extraction):
                for cand in generate(keyphrase, initial, source_type, mode):
                    partial = (
                        cand.probability * keyphrase.relevance * importance * share
                    )
                    items.append(
                        (
                            cand.text,
                            partial,
                            Contribution(source_id, doc.doc_id, keyphrase.text, partial),
                        )
                    )
    return merge_contributions(items)


def score_pipeline(
    initial: InitialQuery, snapshots, cfg: PipelineConfig
) -> list[ScoredSuggestion]:
    """Ranked suggestions for one topic: aggregate, drop the initial query
    itself, rank with deterministic tie-breaking, cut to the output depth."""
    merged = aggregate_suggestions(initial, snapshots, cfg)
    query_key = normalize_text(initial.text)
    kept = [s for s in merged if s.text != query_key]
    return rank_suggestions(kept)[: cfg.output_depth]
