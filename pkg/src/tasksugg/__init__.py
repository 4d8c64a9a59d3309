"""Task-covering query suggestions from heterogeneous web sources.

Given an initial query, the pipeline replays (or fetches) top-K responses
from ten sources — suggestion APIs, web-search snippets, full web documents,
and how-to articles — extracts keyphrases, generates candidate suggestions,
and ranks them under a generative mixture over sources, documents,
keyphrases, and generation rules. A TREC-style harness evaluates ranked
suggestion lists with intent-aware diversity metrics and paired
significance tests.
"""

from .config import PipelineConfig, config_from_dict, config_from_file
from .extraction import (
    ExtractionConfig,
    extract_for_document,
    filter_keyphrases,
    rake_extract,
    relevance_distribution,
)
from .evaluation import (
    JudgmentSet,
    MetricReport,
    alpha_ndcg,
    err_ia,
    evaluate_run,
    paired_ttest,
    parse_qrels,
    parse_run,
    parse_topics,
)
from .generation import concat_no_stutter, generate, generate_expanded, generate_raw
from .model import (
    ALL_SOURCE_IDS,
    Contribution,
    EntityMention,
    InitialQuery,
    Keyphrase,
    RetrievedDocument,
    ScoredSuggestion,
    SourceDescriptor,
    SuggestionCandidate,
    merge_contributions,
    normalize_text,
    source_for_id,
)
from .scoring import (
    SourceWeights,
    aggregate_suggestions,
    doc_weight,
    rank_suggestions,
    ranking_key,
    score_pipeline,
    source_weights,
)
from .snapshots import SnapshotRecord, SnapshotStore

__version__ = "0.1.0"

__all__ = [
    "ALL_SOURCE_IDS",
    "Contribution",
    "EntityMention",
    "ExtractionConfig",
    "InitialQuery",
    "JudgmentSet",
    "Keyphrase",
    "MetricReport",
    "PipelineConfig",
    "RetrievedDocument",
    "ScoredSuggestion",
    "SnapshotRecord",
    "SnapshotStore",
    "SourceDescriptor",
    "SourceWeights",
    "SuggestionCandidate",
    "aggregate_suggestions",
    "alpha_ndcg",
    "concat_no_stutter",
    "config_from_dict",
    "config_from_file",
    "doc_weight",
    "err_ia",
    "evaluate_run",
    "extract_for_document",
    "filter_keyphrases",
    "generate",
    "generate_expanded",
    "generate_raw",
    "merge_contributions",
    "normalize_text",
    "paired_ttest",
    "parse_qrels",
    "parse_run",
    "parse_topics",
    "rake_extract",
    "rank_suggestions",
    "ranking_key",
    "relevance_distribution",
    "score_pipeline",
    "source_for_id",
    "source_weights",
]
