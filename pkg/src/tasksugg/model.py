"""Core domain types shared by all pipeline stages.

Everything here is an immutable value object; stages exchange these and
nothing else, so they are safe to share across threads. Probability
bookkeeping uses plain 64-bit floats: component distributions are expected
to sum to 1 within 1e-9, and additive merges of partial scores are exact to
1e-12 (``math.fsum``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

SOURCE_TYPES = ("QS", "WS", "WD", "WH")
ENGINES = ("google", "bing", "duckduckgo")

RULE_RAW = "raw"
RULE_SUFFIX_TO_QUERY = "suffix_to_query"
RULE_SUFFIX_TO_ENTITY = "suffix_to_entity"
RULE_AS_IS = "as_is"
RULES = (RULE_RAW, RULE_SUFFIX_TO_QUERY, RULE_SUFFIX_TO_ENTITY, RULE_AS_IS)


def normalize_text(raw: str) -> str:
    """Canonical form used for suggestion identity: lowercased, whitespace
    collapsed to single spaces, trimmed. Idempotent."""
    return " ".join(raw.lower().split())


@dataclass(frozen=True)
class EntityMention:
    """An annotated entity span inside the initial query string."""

    surface: str
    start: int
    end: int
    kb_id: str = ""


@dataclass(frozen=True)
class InitialQuery:
    """The user's query plus its annotated entity mentions."""

    topic_id: str
    text: str
    entities: tuple[EntityMention, ...] = ()

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError("query text must be non-empty")
        object.__setattr__(self, "entities", tuple(self.entities))
        for ent in self.entities:
            if not (0 <= ent.start < ent.end <= len(self.text)):
                raise ValueError(
                    f"entity span [{ent.start}, {ent.end}) outside query bounds"
                )
            if self.text[ent.start : ent.end] != ent.surface:
                raise ValueError(
                    f"entity surface {ent.surface!r} does not match query span"
                )


@dataclass(frozen=True)
class SourceDescriptor:
    """Identity of one of the 10 configured information sources."""

    source_id: str
    source_type: str
    engine: str  # "none" for sources without a backing search engine

    def __post_init__(self) -> None:
        if self.source_type not in SOURCE_TYPES:
            raise ValueError(f"unknown source type {self.source_type!r}")
        if self.source_type == "WH":
            if self.engine != "none":
                raise ValueError("WH has no per-engine variants")
        elif self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}")
        expected = (
            self.source_type
            if self.engine == "none"
            else f"{self.source_type}_{self.engine}"
        )
        if self.source_id != expected:
            raise ValueError(f"source_id {self.source_id!r} should be {expected!r}")


def _enumerate_sources() -> dict[str, SourceDescriptor]:
    out: dict[str, SourceDescriptor] = {}
    for stype in ("QS", "WS", "WD"):
        for engine in ENGINES:
            desc = SourceDescriptor(f"{stype}_{engine}", stype, engine)
            out[desc.source_id] = desc
    out["WH"] = SourceDescriptor("WH", "WH", "none")
    return out


SOURCES: dict[str, SourceDescriptor] = _enumerate_sources()
ALL_SOURCE_IDS: tuple[str, ...] = tuple(SOURCES)


def source_for_id(source_id: str) -> SourceDescriptor:
    try:
        return SOURCES[source_id]
    except KeyError:
        raise ValueError(f"unknown source id {source_id!r}") from None


def source_ids_of_types(types: Iterable[str]) -> tuple[str, ...]:
    wanted = set(types)
    unknown = wanted - set(SOURCE_TYPES)
    if unknown:
        raise ValueError(f"unknown source types: {sorted(unknown)}")
    return tuple(s for s in ALL_SOURCE_IDS if SOURCES[s].source_type in wanted)


@dataclass(frozen=True)
class RetrievedDocument:
    """One entry of a source's top-K response.

    ``body`` is snippet text for WS, extracted main-article text for WD/WH,
    and the suggestion string itself for QS.
    """

    doc_id: str
    source: SourceDescriptor
    rank: int
    title: str = ""
    body: str = ""
    url: str = ""

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("rank is 1-based")


@dataclass(frozen=True)
class Keyphrase:
    """Extracted phrase with raw extraction confidence and its normalized
    within-document relevance."""

    text: str
    confidence: float
    relevance: float


@dataclass(frozen=True)
class SuggestionCandidate:
    """A query suggestion generated from one keyphrase via one rule."""

    text: str
    origin_keyphrase: Keyphrase
    rule: str
    confidence: float
    probability: float

    def __post_init__(self) -> None:
        if self.rule not in RULES:
            raise ValueError(f"unknown generation rule {self.rule!r}")


@dataclass(frozen=True)
class Contribution:
    """One (source, document, keyphrase) path's share of a suggestion score."""

    source_id: str
    doc_id: str
    keyphrase: str
    partial: float


@dataclass(frozen=True)
class ScoredSuggestion:
    """A suggestion with its aggregated score and full provenance."""

    text: str
    score: float
    provenance: tuple[Contribution, ...] = ()


def merge_contributions(
    items: Iterable[Sequence],
) -> list[ScoredSuggestion]:
    """Collapse duplicate suggestion texts by summing their partial scores.

    Each item is ``(text, partial)`` or ``(text, partial, Contribution)``.
    Suggestion identity is the normalized text, so differently-cased
    duplicates merge. Provenance is stored in a canonical sort order and
    scores are computed with ``math.fsum``, which makes the output
    independent of input ordering, bit for bit.
    """
    grouped: dict[str, list[Contribution]] = {}
    for item in items:
        text, partial = item[0], float(item[1])
        if partial < 0:
            raise ValueError("partial scores must be non-negative")
        if len(item) > 2 and item[2] is not None:
            contrib = item[2]
        else:
            contrib = Contribution("", "", "", partial)
        grouped.setdefault(normalize_text(text), []).append(contrib)

    merged: list[ScoredSuggestion] = []
    for text in sorted(grouped):
        contribs = sorted(
            grouped[text],
            key=lambda c: (c.source_id, c.doc_id, c.keyphrase, c.partial),
        )
        score = math.fsum(c.partial for c in contribs)
        merged.append(ScoredSuggestion(text, score, tuple(contribs)))
    return merged
