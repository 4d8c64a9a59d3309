"""Declarative pipeline configuration.

A single JSON file drives every run: active sources, response depth,
generation mode (with per-source-type overrides), document importance,
source-weight strategy and calibration, extraction knobs, and evaluation
parameters. The resolved configuration has a stable hash that run files
embed for provenance.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .extraction import ExtractionConfig, load_wordfile
from .model import ALL_SOURCE_IDS, SOURCE_TYPES, source_for_id, source_ids_of_types

DOC_IMPORTANCE_KINDS = ("uniform", "rank_decay")
SOURCE_WEIGHT_STRATEGIES = (
    "uniform",
    "source_type_proportional",
    "individual_proportional",
    "explicit",
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    sources: tuple[str, ...] = ALL_SOURCE_IDS
    k: int = 10
    output_depth: int = 20
    generation_mode: str = "raw"
    mode_by_source_type: dict = field(default_factory=dict)
    doc_importance: str = "uniform"
    source_weight_strategy: str = "uniform"
    calibration: dict = field(default_factory=dict)
    extraction: ExtractionConfig = field(default_factory=ExtractionConfig)
    alpha: float = 0.5
    cutoff: int = 20
    max_grade: int = 2

    def __post_init__(self) -> None:
        if not self.sources:
            raise ConfigError("at least one source must be active")
        for sid in self.sources:
            try:
                source_for_id(sid)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        if len(set(self.sources)) != len(self.sources):
            raise ConfigError("duplicate source ids")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.output_depth < 1:
            raise ConfigError("output_depth must be >= 1")
        if self.generation_mode not in ("raw", "expanded"):
            raise ConfigError(f"unknown generation mode {self.generation_mode!r}")
        for stype, mode in self.mode_by_source_type.items():
            if stype not in SOURCE_TYPES:
                raise ConfigError(f"unknown source type {stype!r}")
            if mode not in ("raw", "expanded"):
                raise ConfigError(f"unknown generation mode {mode!r}")
        if self.doc_importance not in DOC_IMPORTANCE_KINDS:
            raise ConfigError(f"unknown doc importance {self.doc_importance!r}")
        if self.source_weight_strategy not in SOURCE_WEIGHT_STRATEGIES:
            raise ConfigError(
                f"unknown source weight strategy {self.source_weight_strategy!r}"
            )
        if not 0 < self.alpha < 1:
            raise ConfigError("alpha must be in (0, 1)")

    def mode_for(self, source_type: str) -> str:
        return self.mode_by_source_type.get(source_type, self.generation_mode)

    def replace(self, **kwargs) -> "PipelineConfig":
        from dataclasses import replace as _replace

        return _replace(self, **kwargs)

    def canonical_dict(self) -> dict:
        """Stable, fully-resolved view used for hashing and provenance."""
        ext = self.extraction
        return {
            "sources": list(self.sources),
            "k": self.k,
            "output_depth": self.output_depth,
            "generation": {
                "mode": self.generation_mode,
                "by_source_type": dict(sorted(self.mode_by_source_type.items())),
            },
            "doc_importance": self.doc_importance,
            "source_weights": {
                "strategy": self.source_weight_strategy,
                "calibration": dict(sorted(self.calibration.items())),
            },
            "extraction": {
                "min_confidence": ext.min_confidence,
                "max_terms": ext.max_terms,
                "term_len_min": ext.term_len_min,
                "term_len_max": ext.term_len_max,
                "max_digits": ext.max_digits,
                "phrase_delimiters": ext.phrase_delimiters,
                "stopwords_sha256": _digest(sorted(ext.stopwords)),
                "noise_patterns_sha256": _digest(ext.noise_patterns),
            },
            "evaluation": {
                "alpha": self.alpha,
                "cutoff": self.cutoff,
                "max_grade": self.max_grade,
            },
        }

    def config_hash(self) -> str:
        payload = json.dumps(self.canonical_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def _digest(entries) -> str:
    h = hashlib.sha256()
    for entry in entries:
        h.update(entry.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()[:16]


def _build_extraction(section: dict, base_dir: Path | None) -> ExtractionConfig:
    kwargs = {}
    simple = (
        "min_confidence",
        "max_terms",
        "term_len_min",
        "term_len_max",
        "max_digits",
        "phrase_delimiters",
    )
    for key in simple:
        if key in section:
            kwargs[key] = section[key]
    if section.get("stopwords_file"):
        path = _resolve(section["stopwords_file"], base_dir)
        kwargs["stopwords"] = frozenset(load_wordfile(path))
    if "stopwords" in section:
        kwargs["stopwords"] = frozenset(section["stopwords"])
    if section.get("noise_patterns_file"):
        path = _resolve(section["noise_patterns_file"], base_dir)
        kwargs["noise_patterns"] = load_wordfile(path)
    if "noise_patterns" in section:
        kwargs["noise_patterns"] = tuple(section["noise_patterns"])
    return ExtractionConfig(**kwargs)


def _resolve(path_str: str, base_dir: Path | None) -> Path:
    path = Path(path_str)
    if not path.is_absolute() and base_dir is not None:
        path = base_dir / path
    return path


def config_from_dict(data: dict, base_dir: Path | None = None) -> PipelineConfig:
    """Build a config from the JSON schema; paths resolve against base_dir."""
    data = copy.deepcopy(data)
    kwargs: dict = {}

    if "source_types" in data and "sources" in data:
        raise ConfigError("give either sources or source_types, not both")
    if "source_types" in data:
        kwargs["sources"] = source_ids_of_types(data["source_types"])
    elif "sources" in data:
        kwargs["sources"] = tuple(data["sources"])

    for key in ("k", "output_depth", "doc_importance"):
        if key in data:
            kwargs[key] = data[key]

    generation = data.get("generation", {})
    if "mode" in generation:
        kwargs["generation_mode"] = generation["mode"]
    if "by_source_type" in generation:
        kwargs["mode_by_source_type"] = dict(generation["by_source_type"])

    weights = data.get("source_weights", {})
    if "strategy" in weights:
        kwargs["source_weight_strategy"] = weights["strategy"]
    calibration = dict(weights.get("calibration", {}))
    if weights.get("calibration_file"):
        path = _resolve(weights["calibration_file"], base_dir)
        try:
            loaded = json.loads(Path(path).read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read calibration file {path}: {exc}") from exc
        loaded.update(calibration)
        calibration = loaded
    if calibration:
        kwargs["calibration"] = {k: float(v) for k, v in calibration.items()}

    if "extraction" in data:
        kwargs["extraction"] = _build_extraction(data["extraction"], base_dir)

    evaluation = data.get("evaluation", {})
    for key in ("alpha", "cutoff", "max_grade"):
        if key in evaluation:
            kwargs[key] = evaluation[key]

    try:
        return PipelineConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def config_from_file(path) -> PipelineConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(data, base_dir=path.parent)


def merge_overrides(base: dict, overrides: dict) -> dict:
    """Deep-merge override keys onto a config dict (dicts merge, rest replace)."""
    merged = copy.deepcopy(base)
    for key, value in overrides.items():
        if (
            key in merged
            and isinstance(merged[key], dict)
            and isinstance(value, dict)
        ):
            merged[key] = merge_overrides(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    # source scope overrides are exclusive: the newer one wins
    if "source_types" in overrides:
        merged.pop("sources", None)
    elif "sources" in overrides:
        merged.pop("source_types", None)
    return merged
