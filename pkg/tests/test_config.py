import json

import pytest

from tasksugg.config import (
    ConfigError,
    PipelineConfig,
    config_from_dict,
    config_from_file,
    merge_overrides,
)
from tasksugg.model import ALL_SOURCE_IDS


class TestPipelineConfig:
    def test_defaults(self):
        cfg = PipelineConfig()
        assert cfg.sources == ALL_SOURCE_IDS
        assert cfg.k == 10
        assert cfg.output_depth == 20
        assert cfg.generation_mode == "raw"
        assert cfg.doc_importance == "uniform"
        assert cfg.cutoff == 20

    def test_mode_overrides_per_source_type(self):
        cfg = PipelineConfig(mode_by_source_type={"WH": "expanded"})
        assert cfg.mode_for("WH") == "expanded"
        assert cfg.mode_for("QS") == "raw"

    def test_rejects_unknown_values(self):
        with pytest.raises(ConfigError):
            PipelineConfig(sources=("QS_altavista",))
        with pytest.raises(ConfigError):
            PipelineConfig(generation_mode="backwards")
        with pytest.raises(ConfigError):
            PipelineConfig(doc_importance="random")
        with pytest.raises(ConfigError):
            PipelineConfig(alpha=1.5)


class TestConfigFromDict:
    def test_source_types_sugar(self):
        cfg = config_from_dict({"source_types": ["QS"]})
        assert all(s.startswith("QS") for s in cfg.sources)
        assert len(cfg.sources) == 3

    def test_nested_sections(self):
        cfg = config_from_dict(
            {
                "generation": {"mode": "expanded", "by_source_type": {"WS": "raw"}},
                "source_weights": {"strategy": "explicit", "calibration": {"WH": 1}},
                "evaluation": {"alpha": 0.6, "cutoff": 10},
                "extraction": {"min_confidence": 3.0},
            }
        )
        assert cfg.generation_mode == "expanded"
        assert cfg.mode_for("WS") == "raw"
        assert cfg.source_weight_strategy == "explicit"
        assert cfg.calibration == {"WH": 1.0}
        assert cfg.alpha == 0.6
        assert cfg.extraction.min_confidence == 3.0

    def test_sources_and_types_conflict(self):
        with pytest.raises(ConfigError):
            config_from_dict({"sources": ["WH"], "source_types": ["QS"]})

    def test_calibration_file_resolved_relative(self, tmp_path):
        (tmp_path / "cal.json").write_text('{"QS": 0.4}', "utf-8")
        config = tmp_path / "config.json"
        config.write_text(
            json.dumps(
                {
                    "source_types": ["QS"],
                    "source_weights": {
                        "strategy": "source_type_proportional",
                        "calibration_file": "cal.json",
                    },
                }
            ),
            "utf-8",
        )
        cfg = config_from_file(config)
        assert cfg.calibration == {"QS": 0.4}

    def test_stopword_file_override(self, tmp_path):
        words = tmp_path / "stop.txt"
        words.write_text("# comment\nfoo\nbar\n", "utf-8")
        cfg = config_from_dict(
            {"extraction": {"stopwords_file": str(words)}}, base_dir=tmp_path
        )
        assert cfg.extraction.stopwords == frozenset({"foo", "bar"})


class TestConfigHash:
    def test_stable_for_equal_configs(self):
        assert PipelineConfig().config_hash() == PipelineConfig().config_hash()

    def test_differs_across_settings(self):
        base = PipelineConfig()
        assert base.config_hash() != PipelineConfig(k=5).config_hash()
        assert (
            base.config_hash()
            != PipelineConfig(generation_mode="expanded").config_hash()
        )
        assert (
            base.config_hash()
            != PipelineConfig(sources=("QS_google",)).config_hash()
        )


class TestMergeOverrides:
    def test_nested_merge(self):
        base = {"generation": {"mode": "raw"}, "k": 10}
        merged = merge_overrides(base, {"generation": {"by_source_type": {"WH": "expanded"}}})
        assert merged["generation"] == {
            "mode": "raw",
            "by_source_type": {"WH": "expanded"},
        }
        assert merged["k"] == 10
        assert base["generation"] == {"mode": "raw"}  # base untouched

    def test_source_scope_override_is_exclusive(self):
        base = {"sources": ["WH"]}
        merged = merge_overrides(base, {"source_types": ["QS"]})
        assert "sources" not in merged
        assert merged["source_types"] == ["QS"]
