"""TREC-style evaluation: topic/judgment parsing, intent-aware diversity
metrics at a rank cutoff, and paired significance testing.

Judgments grade (subtask, suggestion-string) pairs on a 0..2 scale;
unjudged pairs count as grade 0. Strings are compared after
``normalize_text`` on both the run and judgment side, since the task is
string matching and byte-exact comparison would punish case differences.

Metric conventions: the cascade metric uses graded gains
(2^g - 1) / 2^g_max with uniform intent weights; the diversity-aware nDCG
uses binary relevance (grade > 0), geometric novelty discount (1 - alpha)
per already-covered subtask, 1/log2(rank+1) rank discount, and a greedy
ideal ranking over the topic's judged-relevant pool (the conventional,
approximate normalization).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from .model import InitialQuery, EntityMention, normalize_text

logger = logging.getLogger(__name__)


class FormatError(ValueError):
    def __init__(self, message: str, path=None, line: int | None = None) -> None:
        location = f"{path}:{line}: " if path is not None and line else ""
        super().__init__(f"{location}{message}")
        self.path = path
        self.line = line


class LengthMismatch(ValueError):
    pass


class TooFewPairs(ValueError):
    pass


VALID_GRADES = (0, 1, 2)


@dataclass(frozen=True)
class JudgmentSet:
    """Graded (subtask, suggestion text) assessments for one topic."""

    topic_id: str
    subtasks: frozenset[str]
    grades: dict  # (subtask_id, normalized text) -> grade

    def grade(self, subtask_id: str, text: str) -> int:
        return self.grades.get((subtask_id, text), 0)

    def relevant_pool(self) -> list[str]:
        """Distinct judged strings with a positive grade for any subtask."""
        return sorted({t for (_, t), g in self.grades.items() if g > 0})

    @property
    def empty(self) -> bool:
        return not self.subtasks


@dataclass(frozen=True)
class TopicMetrics:
    err_ia: float
    alpha_ndcg: float


@dataclass(frozen=True)
class MetricReport:
    per_topic: dict
    mean_err_ia: float
    mean_alpha_ndcg: float
    cutoff: int
    alpha: float
    skipped_topics: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "alpha": self.alpha,
            "per_topic": {
                topic: {"err_ia": m.err_ia, "alpha_ndcg": m.alpha_ndcg}
                for topic, m in sorted(self.per_topic.items())
            },
            "means": {
                "err_ia": self.mean_err_ia,
                "alpha_ndcg": self.mean_alpha_ndcg,
            },
            "skipped_topics": list(self.skipped_topics),
            "notes": list(self.notes),
        }

    def render_text(self) -> str:
        width = max([len("topic")] + [len(t) for t in self.per_topic])
        lines = [f"{'topic':<{width}}  {'ERR-IA':>8}  {'a-NDCG':>8}"]
        for topic in sorted(self.per_topic):
            m = self.per_topic[topic]
            lines.append(
                f"{topic:<{width}}  {m.err_ia:>8.4f}  {m.alpha_ndcg:>8.4f}"
            )
        lines.append(
            f"{'mean':<{width}}  {self.mean_err_ia:>8.4f}  "
            f"{self.mean_alpha_ndcg:>8.4f}"
        )
        for skipped in self.skipped_topics:
            lines.append(f"# skipped (no judgments): {skipped}")
        for note in self.notes:
            lines.append(f"# {note}")
        return "\n".join(lines) + "\n"


def _graded_gain(grade: int, max_grade: int) -> float:
    return (2**grade - 1) / 2**max_grade


def err_ia(
    run, judgments: JudgmentSet, cutoff: int = 20, max_grade: int = 2
) -> float:
    """Intent-aware expected reciprocal rank at a cutoff.

    Cascade model per subtask: a user scans down the list and stops at rank
    i with probability proportional to the graded gain there, having been
    unsatisfied by everything above. Averaged uniformly over subtasks.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if judgments.empty:
        return 0.0
    texts = [normalize_text(t) for t in run[:cutoff]]
    per_subtask = []
    for subtask in sorted(judgments.subtasks):
        not_stopped = 1.0
        total = 0.0
        for i, text in enumerate(texts, start=1):
            gain = _graded_gain(judgments.grade(subtask, text), max_grade)
            total += not_stopped * gain / i
            not_stopped *= 1.0 - gain
        per_subtask.append(total)
    return math.fsum(per_subtask) / len(per_subtask)


def _alpha_dcg(items, judgments: JudgmentSet, depth: int, alpha: float) -> float:
    covered: dict[str, int] = {}
    dcg = 0.0
    for i, text in enumerate(items[:depth], start=1):
        positive = [
            st for st in judgments.subtasks if judgments.grade(st, text) > 0
        ]
        gain = math.fsum((1.0 - alpha) ** covered.get(st, 0) for st in positive)
        for st in positive:
            covered[st] = covered.get(st, 0) + 1
        dcg += gain / math.log2(i + 1)
    return dcg


def _greedy_ideal(judgments: JudgmentSet, depth: int, alpha: float) -> list[str]:
    """Greedy ideal ordering of the judged-relevant pool (without repeats)."""
    pool = judgments.relevant_pool()
    covered: dict[str, int] = {}
    ideal: list[str] = []
    remaining = list(pool)
    for _ in range(min(depth, len(pool))):
        best_text, best_gain = None, -1.0
        for text in remaining:
            gain = math.fsum(
                (1.0 - alpha) ** covered.get(st, 0)
                for st in judgments.subtasks
                if judgments.grade(st, text) > 0
            )
            if gain > best_gain:  # ties keep the lexicographically first
                best_text, best_gain = text, gain
        ideal.append(best_text)
        remaining.remove(best_text)
        for st in judgments.subtasks:
            if judgments.grade(st, best_text) > 0:
                covered[st] = covered.get(st, 0) + 1
    return ideal


def alpha_ndcg(
    run, judgments: JudgmentSet, cutoff: int = 20, alpha: float = 0.5
) -> float:
    """Diversity-aware nDCG at a cutoff, normalized by the greedy ideal."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    if judgments.empty:
        return 0.0
    texts = [normalize_text(t) for t in run[:cutoff]]
    ideal = _greedy_ideal(judgments, cutoff, alpha)
    ideal_dcg = _alpha_dcg(ideal, judgments, cutoff, alpha)
    if ideal_dcg == 0.0:
        return 0.0
    # The greedy ideal is the conventional approximation; clamp so that
    # duplicate-laden runs cannot nominally exceed it.
    return min(1.0, _alpha_dcg(texts, judgments, cutoff, alpha) / ideal_dcg)


# --- paired significance test ---------------------------------------------


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz)."""
    max_iterations = 300
    eps = 3e-16
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iterations + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log(1.0 - x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_tailed_p(t: float, df: int) -> float:
    if math.isinf(t):
        return 0.0
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


def paired_ttest(a, b) -> tuple[float, float]:
    """Two-tailed paired t-test over per-topic scores.

    Returns (t, p). Zero-variance differences degenerate: all-zero
    differences give (0, 1); constant nonzero differences give
    (signed inf, 0) — callers should surface the latter as p < 1e-12.
    """
    a = list(a)
    b = list(b)
    if len(a) != len(b):
        raise LengthMismatch(f"paired samples differ in length: {len(a)} vs {len(b)}")
    n = len(a)
    if n < 2:
        raise TooFewPairs("need at least two pairs")
    diffs = [x - y for x, y in zip(a, b)]
    mean = math.fsum(diffs) / n
    variance = math.fsum((d - mean) ** 2 for d in diffs) / (n - 1)
    if variance == 0.0:
        if mean == 0.0:
            return 0.0, 1.0
        return math.copysign(math.inf, mean), 0.0
    t = mean / math.sqrt(variance / n)
    return t, student_t_two_tailed_p(t, n - 1)


def significance_marker(p: float) -> str:
    if p < 0.001:
        return "‡"  # double dagger
    if p < 0.05:
        return "†"  # dagger
    return ""


# --- file parsing ----------------------------------------------------------


def parse_topics(path) -> list[InitialQuery]:
    """Topics file: JSON list (or {"topics": [...]}) of objects with
    topic_id, text, and entity spans referencing the text."""
    import json

    path = Path(path)
    try:
        data = json.loads(path.read_text("utf-8"))
    except OSError as exc:
        raise FormatError(f"cannot read topics: {exc}", path=path) from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}", path=path) from exc
    if isinstance(data, dict):
        data = data.get("topics", [])
    if not isinstance(data, list):
        raise FormatError("topics must be a list", path=path)

    topics: list[InitialQuery] = []
    for i, entry in enumerate(data):
        try:
            entities = tuple(
                EntityMention(
                    surface=e["surface"],
                    start=int(e["start"]),
                    end=int(e["end"]),
                    kb_id=str(e.get("kb_id", "")),
                )
                for e in entry.get("entities", [])
            )
            topics.append(
                InitialQuery(
                    topic_id=str(entry["topic_id"]),
                    text=entry["text"],
                    entities=entities,
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad topic entry #{i}: {exc}", path=path) from exc
    return topics


def parse_qrels(path) -> dict:
    """Judgments file: one assessment per line.

    Canonical layout is ``topic_id subtask_id grade suggestion-text...``;
    lines with the grade as the trailing token
    (``topic_id subtask_id suggestion-text... grade``) are accepted too.
    Duplicate (topic, subtask, text) assessments: last one wins, logged.
    """
    path = Path(path)
    raw_grades: dict[str, dict] = {}
    subtasks: dict[str, set] = {}
    try:
        lines = path.read_text("utf-8").splitlines()
    except OSError as exc:
        raise FormatError(f"cannot read qrels: {exc}", path=path) from exc

    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) < 4:
            raise FormatError(
                "expected: topic subtask grade text...", path=path, line=lineno
            )
        topic_id, subtask_id = parts[0], parts[1]
        if parts[2].lstrip("-").isdigit():
            grade = int(parts[2])
            text = " ".join(parts[3:])
        elif parts[-1].lstrip("-").isdigit():
            grade = int(parts[-1])
            text = " ".join(parts[2:-1])
        else:
            raise FormatError(
                f"malformed grade {parts[2]!r}", path=path, line=lineno
            )
        if grade not in VALID_GRADES:
            raise FormatError(
                f"grade {grade} outside {VALID_GRADES}", path=path, line=lineno
            )
        key = (subtask_id, normalize_text(text))
        topic_grades = raw_grades.setdefault(topic_id, {})
        if key in topic_grades:
            logger.warning(
                "%s:%d: duplicate assessment for %s; keeping the last one",
                path,
                lineno,
                key,
            )
        topic_grades[key] = grade
        subtasks.setdefault(topic_id, set()).add(subtask_id)

    return {
        topic: JudgmentSet(
            topic_id=topic,
            subtasks=frozenset(subtasks[topic]),
            grades=raw_grades[topic],
        )
        for topic in raw_grades
    }


def parse_run(path) -> dict:
    """Run file: ``topic_id rank score suggestion-text...`` per line,
    '#' comment lines ignored. Returns topic -> ranked list of texts."""
    path = Path(path)
    rows: dict[str, list] = {}
    try:
        lines = path.read_text("utf-8").splitlines()
    except OSError as exc:
        raise FormatError(f"cannot read run: {exc}", path=path) from exc
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) < 4:
            raise FormatError(
                "expected: topic rank score text...", path=path, line=lineno
            )
        topic_id = parts[0]
        try:
            rank = int(parts[1])
            score = float(parts[2])
        except ValueError as exc:
            raise FormatError(str(exc), path=path, line=lineno) from exc
        text = " ".join(parts[3:])
        rows.setdefault(topic_id, []).append((rank, score, normalize_text(text)))
    return {
        topic: [text for _, _, text in sorted(entries, key=lambda e: e[0])]
        for topic, entries in rows.items()
    }


RUN_SIDE_QUERY_REMOVAL_NOTE = (
    "suggestions equal to the initial query are removed from runs at "
    "generation time; judgments are left untouched"
)


def evaluate_run(
    run,
    qrels,
    cutoff: int = 20,
    alpha: float = 0.5,
    max_grade: int = 2,
) -> MetricReport:
    """Score a run against judgments, topic by topic.

    Every judged topic contributes (an absent topic counts as an empty
    ranking), which keeps topic sets aligned when comparing runs; run
    topics without judgments are skipped and listed.
    """
    if isinstance(run, (str, Path)):
        run = parse_run(run)
    if isinstance(qrels, (str, Path)):
        qrels = parse_qrels(qrels)

    per_topic: dict[str, TopicMetrics] = {}
    skipped = tuple(sorted(t for t in run if t not in qrels))
    for topic_id in sorted(qrels):
        judgments = qrels[topic_id]
        ranked = run.get(topic_id, [])
        per_topic[topic_id] = TopicMetrics(
            err_ia=err_ia(ranked, judgments, cutoff=cutoff, max_grade=max_grade),
            alpha_ndcg=alpha_ndcg(ranked, judgments, cutoff=cutoff, alpha=alpha),
        )

    count = len(per_topic)
    mean_err = math.fsum(m.err_ia for m in per_topic.values()) / count if count else 0.0
    mean_ndcg = (
        math.fsum(m.alpha_ndcg for m in per_topic.values()) / count if count else 0.0
    )
    return MetricReport(
        per_topic=per_topic,
        mean_err_ia=mean_err,
        mean_alpha_ndcg=mean_ndcg,
        cutoff=cutoff,
        alpha=alpha,
        skipped_topics=skipped,
        notes=(RUN_SIDE_QUERY_REMOVAL_NOTE,),
    )
