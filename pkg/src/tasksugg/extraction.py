"""Keyphrase extraction over document bodies.

Candidate phrases are maximal word runs free of stopwords and phrase
delimiters. Each word is scored by degree/frequency over the co-occurrence
graph of candidate phrases (degree counts the word itself, i.e. it equals
the summed length of the phrase occurrences containing the word); a phrase's
extraction confidence is the sum of its word scores. Cleansing filters drop
low-confidence, over-long, or noisy phrases, and the surviving confidences
are normalized into a per-document relevance distribution.

Suggestion-API documents are special-cased: the whole body is taken as a
single keyphrase with relevance exactly 1, bypassing extraction.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .model import Keyphrase, RetrievedDocument

DEFAULT_PHRASE_DELIMITERS = '.,;:!?()[]"\n'


def _read_wordfile(text: str) -> tuple[str, ...]:
    """One entry per line, UTF-8, '#' starts a comment."""
    entries = []
    for line in text.splitlines():
        entry = line.split("#", 1)[0].strip()
        if entry:
            entries.append(entry)
    return tuple(entries)


def load_wordfile(path) -> tuple[str, ...]:
    with open(path, encoding="utf-8") as fh:
        return _read_wordfile(fh.read())


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    text = resources.files("tasksugg.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(_read_wordfile(text))


@lru_cache(maxsize=1)
def default_noise_patterns() -> tuple[str, ...]:
    text = (
        resources.files("tasksugg.data")
        .joinpath("noise_patterns.txt")
        .read_text("utf-8")
    )
    return _read_wordfile(text)


@dataclass(frozen=True)
class ExtractionConfig:
    """Knobs for extraction and the cleansing filters.

    ``noise_patterns`` are regular expressions matched (``re.search``)
    against individual phrase terms. The confidence threshold is calibrated
    to the degree/frequency score scale; plugging in a differently-scaled
    extractor changes its meaning.
    """

    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    phrase_delimiters: str = DEFAULT_PHRASE_DELIMITERS
    min_confidence: float = 2.0
    max_terms: int = 5
    term_len_min: int = 4
    term_len_max: int = 15
    max_digits: int = 4
    noise_patterns: tuple[str, ...] = field(default_factory=default_noise_patterns)

    def __post_init__(self) -> None:
        if self.min_confidence < 0:
            raise ValueError("min_confidence must be >= 0")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if self.term_len_min > self.term_len_max:
            raise ValueError("term_len_min must be <= term_len_max")


@lru_cache(maxsize=32)
def _delimiter_regex(delimiters: str) -> re.Pattern:
    return re.compile("[" + re.escape(delimiters) + "]")


@lru_cache(maxsize=32)
def _compiled_noise(patterns: tuple[str, ...]) -> tuple[re.Pattern, ...]:
    return tuple(re.compile(p) for p in patterns)


def candidate_phrases(body: str, cfg: ExtractionConfig) -> list[list[str]]:
    """Split lowercased text at delimiters and stopwords into word runs."""
    fragments = _delimiter_regex(cfg.phrase_delimiters).split(body.lower())
    phrases: list[list[str]] = []
    for fragment in fragments:
        run: list[str] = []
        for word in fragment.split():
            if word in cfg.stopwords:
                if run:
                    phrases.append(run)
                    run = []
            else:
                run.append(word)
        if run:
            phrases.append(run)
    return phrases


def rake_extract(body: str, cfg: ExtractionConfig) -> list[tuple[str, float]]:
    """Extract candidate phrases with degree/frequency confidences.

    Returns (phrase, confidence) pairs sorted by confidence descending,
    ties broken lexicographically. Repeated occurrences of the same phrase
    feed the word statistics but yield a single output entry.
    """
    phrases = candidate_phrases(body, cfg)
    freq: dict[str, int] = {}
    degree: dict[str, int] = {}
    for words in phrases:
        for word in words:
            freq[word] = freq.get(word, 0) + 1
            degree[word] = degree.get(word, 0) + len(words)

    scored: dict[str, float] = {}
    for words in phrases:
        phrase = " ".join(words)
        if phrase not in scored:
            scored[phrase] = sum(degree[w] / freq[w] for w in words)
    return sorted(scored.items(), key=lambda kv: (-kv[1], kv[0]))


def _term_ok(term: str, cfg: ExtractionConfig) -> bool:
    for pattern in _compiled_noise(cfg.noise_patterns):
        if pattern.search(term):
            return False
    if term.isdigit():
        return len(term) <= cfg.max_digits
    return cfg.term_len_min <= len(term) <= cfg.term_len_max


def keep_keyphrase(phrase: str, confidence: float, cfg: ExtractionConfig) -> bool:
    if confidence <= cfg.min_confidence:
        return False
    terms = phrase.split()
    if not terms or len(terms) > cfg.max_terms:
        return False
    return all(_term_ok(t, cfg) for t in terms)


def filter_keyphrases(
    raw: list[tuple[str, float]], cfg: ExtractionConfig
) -> list[tuple[str, float]]:
    """Apply the cleansing filters; output is a subset of the input."""
    return [(p, c) for p, c in raw if keep_keyphrase(p, c, cfg)]


def relevance_distribution(kept: list[tuple[str, float]]) -> list[Keyphrase]:
    """Normalize confidences into a distribution summing to 1."""
    if not kept:
        return []
    for _, confidence in kept:
        if confidence <= 0:
            raise ValueError("confidences must be positive")
    total = math.fsum(c for _, c in kept)
    return [Keyphrase(p, c, c / total) for p, c in kept]


def extract_for_document(
    doc: RetrievedDocument, cfg: ExtractionConfig
) -> list[Keyphrase]:
    """Produce the per-document keyphrase relevance distribution.

    QS documents are themselves suggestion strings: one keyphrase, relevance
    exactly 1, no confidence threshold. WS documents extract over the title
    and snippet joined with a phrase delimiter so no phrase crosses the
    boundary.
    """
    if doc.source.source_type == "QS":
        text = doc.body.strip()
        return [Keyphrase(text, 1.0, 1.0)] if text else []
    if doc.source.source_type == "WS":
        parts = [s.strip() for s in (doc.title, doc.body) if s and s.strip()]
        body = " . ".join(parts)
    else:
        body = doc.body
    return relevance_distribution(filter_keyphrases(rake_extract(body, cfg), cfg))
