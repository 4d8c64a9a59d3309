"""Independent reference implementations used to cross-check the library.

These deliberately recompute everything from first principles (explicit
co-occurrence matrices, full path enumeration, product-form cascade sums,
from-scratch coverage recounts) and share no code with the implementations
they verify.
"""

import math
import random
import re

from tasksugg.config import PipelineConfig
from tasksugg.extraction import ExtractionConfig, extract_for_document
from tasksugg.generation import concat_no_stutter
from tasksugg.model import (
    EntityMention,
    InitialQuery,
    RetrievedDocument,
    normalize_text,
    source_for_id,
)
from tasksugg.snapshots import SnapshotRecord

TIMESTAMP = "2025-11-05T12:00:00+00:00"

PLAIN_EXTRACTION = ExtractionConfig(
    stopwords=frozenset({"a", "the", "is"}), noise_patterns=()
)


# -- keyphrase extraction ----------------------------------------------------


def cooccurrence_oracle(body: str, cfg: ExtractionConfig):
    """Brute-force reference: build the full word co-occurrence matrix of the
    candidate phrases, read degree as row sums and frequency as the word's
    occurrence count, and score phrases as the sum of degree/frequency over
    their words."""
    fragments = re.split("[" + re.escape(cfg.phrase_delimiters) + "]", body.lower())
    phrases = []
    for fragment in fragments:
        current = []
        for token in fragment.split():
            if token in cfg.stopwords:
                if current:
                    phrases.append(tuple(current))
                    current = []
            else:
                current.append(token)
        if current:
            phrases.append(tuple(current))

    vocab = sorted({w for p in phrases for w in p})
    index = {w: i for i, w in enumerate(vocab)}
    matrix = [[0] * len(vocab) for _ in vocab]
    frequency = {w: 0 for w in vocab}
    for phrase in phrases:
        for w1 in phrase:
            frequency[w1] += 1
            for w2 in phrase:
                matrix[index[w1]][index[w2]] += 1

    def word_score(w):
        # degree = row sum of the co-occurrence matrix (self included);
        # frequency = occurrence count, which only differs from the diagonal
        # when a word repeats inside a single phrase
        return sum(matrix[index[w]]) / frequency[w]

    scores = {}
    for phrase in phrases:
        text = " ".join(phrase)
        scores.setdefault(text, math.fsum(word_score(w) for w in phrase))
    return scores


# -- pipeline scoring ----------------------------------------------------------


def qs_snapshot(topic_id, source_id, texts):
    source = source_for_id(source_id)
    docs = tuple(
        RetrievedDocument(f"{source_id}:{r}", source, r, body=t)
        for r, t in enumerate(texts, start=1)
    )
    return SnapshotRecord(topic_id, source, TIMESTAMP, docs)


def body_snapshot(topic_id, source_id, bodies):
    source = source_for_id(source_id)
    docs = tuple(
        RetrievedDocument(f"{source_id}:{r}", source, r, body=b)
        for r, b in enumerate(bodies, start=1)
    )
    return SnapshotRecord(topic_id, source, TIMESTAMP, docs)


def brute_force_scores(initial, snapshots, cfg):
    """Independent path enumeration: walk every (source, document, keyphrase,
    variant) combination, recompute each factor from first principles, and
    accumulate into a dict keyed by normalized text."""
    active = sorted(cfg.sources)
    if cfg.source_weight_strategy == "uniform":
        shares = {sid: 1.0 / len(active) for sid in active}
    elif cfg.source_weight_strategy == "explicit":
        total = sum(cfg.calibration.get(sid, 0.0) for sid in active)
        shares = {sid: cfg.calibration.get(sid, 0.0) / total for sid in active}
    else:
        raise NotImplementedError

    totals: dict[str, float] = {}
    for snap in snapshots:
        sid = snap.source.source_id
        if sid not in shares:
            continue
        docs = snap.documents[: cfg.k]
        n = len(docs)
        for doc in docs:
            if cfg.doc_importance == "uniform":
                d_imp = 1.0 / n
            else:
                d_imp = (cfg.k - doc.rank + 1) / sum(
                    cfg.k - i + 1 for i in range(1, n + 1)
                )
            for kp in extract_for_document(doc, cfg.extraction):
                mode = cfg.mode_for(snap.source.source_type)
                if snap.source.source_type == "QS" or mode == "raw":
                    variants = [kp.text]
                else:
                    variants = [concat_no_stutter(initial.text, kp.text)]
                    for ent in initial.entities:
                        variants.append(concat_no_stutter(ent.surface, kp.text))
                    variants.append(kp.text)
                counts: dict[str, float] = {}
                for text in variants:
                    counts[normalize_text(text)] = (
                        counts.get(normalize_text(text), 0.0) + 1.0
                    )
                denom = sum(counts.values())
                for text, count in counts.items():
                    share = count / denom
                    totals[text] = totals.get(text, 0.0) + (
                        share * kp.relevance * d_imp * shares[sid]
                    )
    return totals


def random_instance(rng, topic_id="T"):
    """Small random pipeline instance (<= 3 sources x 3 docs x 3 keyphrases)."""
    words = ["cake", "venue", "gown", "plan", "cheap", "list", "shop", "idea"]

    def phrase():
        return " ".join(rng.sample(words, rng.randint(2, 3)))

    entities = []
    text = "low wedding budget"
    if rng.random() < 0.5:
        entities.append(EntityMention("wedding", 4, 11))
    initial = InitialQuery(topic_id, text, tuple(entities))

    sources = rng.sample(["QS_google", "WS_bing", "WD_duckduckgo"], rng.randint(1, 3))
    snapshots = []
    for sid in sources:
        n_docs = rng.randint(1, 3)
        if sid.startswith("QS"):
            snapshots.append(
                qs_snapshot(topic_id, sid, [phrase() for _ in range(n_docs)])
            )
        else:
            bodies = [
                ". ".join(phrase() for _ in range(rng.randint(1, 3)))
                for _ in range(n_docs)
            ]
            snapshots.append(body_snapshot(topic_id, sid, bodies))

    cfg = PipelineConfig(
        sources=tuple(sources),
        generation_mode=rng.choice(["raw", "expanded"]),
        doc_importance=rng.choice(["uniform", "rank_decay"]),
        extraction=PLAIN_EXTRACTION,
    )
    return initial, snapshots, cfg


# -- diversity metrics ---------------------------------------------------------


def err_ia_oracle(run, judgments, cutoff=20, max_grade=2):
    """Direct product-form evaluation of the cascade metric."""
    if not judgments.subtasks:
        return 0.0
    texts = [normalize_text(t) for t in run[:cutoff]]
    totals = []
    for subtask in judgments.subtasks:
        total = 0.0
        for i in range(1, len(texts) + 1):
            r_i = (2 ** judgments.grade(subtask, texts[i - 1]) - 1) / 2**max_grade
            escaped = math.prod(
                1.0 - (2 ** judgments.grade(subtask, texts[j - 1]) - 1) / 2**max_grade
                for j in range(1, i)
            )
            total += r_i * escaped / i
        totals.append(total)
    return math.fsum(totals) / len(totals)


def alpha_dcg_oracle(items, judgments, depth, alpha):
    """Gain recomputed from scratch at every rank (no running counters)."""
    dcg = 0.0
    for i, text in enumerate(items[:depth], start=1):
        gain = 0.0
        for subtask in judgments.subtasks:
            if judgments.grade(subtask, text) > 0:
                prior = sum(
                    1 for p in items[: i - 1] if judgments.grade(subtask, p) > 0
                )
                gain += (1.0 - alpha) ** prior
        dcg += gain / math.log2(i + 1)
    return dcg


def alpha_ndcg_oracle(run, judgments, cutoff=20, alpha=0.5):
    if not judgments.subtasks:
        return 0.0
    texts = [normalize_text(t) for t in run[:cutoff]]
    pool = sorted({t for (_, t), g in judgments.grades.items() if g > 0})
    ideal = []
    remaining = list(pool)
    while remaining and len(ideal) < cutoff:
        best, best_gain = None, -1.0
        for cand in remaining:
            gain = 0.0
            for subtask in judgments.subtasks:
                if judgments.grade(subtask, cand) > 0:
                    prior = sum(1 for p in ideal if judgments.grade(subtask, p) > 0)
                    gain += (1.0 - alpha) ** prior
            if gain > best_gain:
                best, best_gain = cand, gain
        ideal.append(best)
        remaining.remove(best)
    ideal_dcg = alpha_dcg_oracle(ideal, judgments, cutoff, alpha)
    if ideal_dcg == 0.0:
        return 0.0
    return min(1.0, alpha_dcg_oracle(texts, judgments, cutoff, alpha) / ideal_dcg)
