"""Turning keyphrases into query-suggestion candidates.

Two strategies: take the raw keyphrase as the suggestion, or expand it by
combining it with the initial query and its entity mentions. Suggestion-API
sources always take the raw path since their documents already are queries.
"""

from __future__ import annotations

import math

from .model import (
    InitialQuery,
    Keyphrase,
    RULE_AS_IS,
    RULE_RAW,
    RULE_SUFFIX_TO_ENTITY,
    RULE_SUFFIX_TO_QUERY,
    SuggestionCandidate,
    normalize_text,
)

GENERATION_MODES = ("raw", "expanded")


def concat_no_stutter(left: str, right: str) -> str:
    """Join two phrases, deleting the word overlap across the seam.

    The longest word-sequence suffix of ``left`` that equals (ignoring case)
    a word-sequence prefix of ``right`` is dropped from ``right``; whatever
    remains is appended with a single space. If nothing of ``right``
    survives, the result is just ``left``.

    >>> concat_no_stutter("low wedding budget", "wedding budget ideas")
    'low wedding budget ideas'
    """
    left_words = left.split()
    right_words = right.split()
    left_lower = [w.lower() for w in left_words]
    right_lower = [w.lower() for w in right_words]
    overlap = 0
    for size in range(min(len(left_words), len(right_words)), 0, -1):
        if left_lower[len(left_lower) - size :] == right_lower[:size]:
            overlap = size
            break
    return " ".join(left_words + right_words[overlap:])


def generate_raw(keyphrase: Keyphrase) -> list[SuggestionCandidate]:
    """The keyphrase itself is the suggestion, with probability 1."""
    return [
        SuggestionCandidate(
            text=keyphrase.text,
            origin_keyphrase=keyphrase,
            rule=RULE_RAW,
            confidence=1.0,
            probability=1.0,
        )
    ]


def generate_expanded(
    keyphrase: Keyphrase, initial: InitialQuery
) -> list[SuggestionCandidate]:
    """Expansion rules: keyphrase as suffix to the query, as suffix to each
    entity mention, and as-is.

    Every generated variant carries a uniform confidence of 1; variants whose
    normalized texts coincide merge by summing confidence before the final
    normalization, so emitted probabilities always sum to 1.
    """
    variants: list[tuple[str, str]] = [
        (concat_no_stutter(initial.text, keyphrase.text), RULE_SUFFIX_TO_QUERY)
    ]
    for entity in initial.entities:
        variants.append(
            (concat_no_stutter(entity.surface, keyphrase.text), RULE_SUFFIX_TO_ENTITY)
        )
    variants.append((keyphrase.text, RULE_AS_IS))

    order: list[str] = []
    merged: dict[str, list] = {}
    for text, rule in variants:
        key = normalize_text(text)
        if key in merged:
            merged[key][2] += 1.0
        else:
            merged[key] = [text, rule, 1.0]
            order.append(key)

    total = math.fsum(merged[key][2] for key in order)
    return [
        SuggestionCandidate(
            text=merged[key][0],
            origin_keyphrase=keyphrase,
            rule=merged[key][1],
            confidence=merged[key][2],
            probability=merged[key][2] / total,
        )
        for key in order
    ]


def generate(
    keyphrase: Keyphrase,
    initial: InitialQuery,
    source_type: str,
    mode: str,
) -> list[SuggestionCandidate]:
    """Dispatch on mode, with QS sources pinned to the raw path."""
    if mode not in GENERATION_MODES:
        raise ValueError(f"unknown generation mode {mode!r}")
    if source_type == "QS" or mode == "raw":
        return generate_raw(keyphrase)
    return generate_expanded(keyphrase, initial)
