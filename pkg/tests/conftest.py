from pathlib import Path

import pytest

from tasksugg.extraction import ExtractionConfig

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture
def plain_extraction() -> ExtractionConfig:
    """Extraction config with a tiny controlled stopword list and no noise
    filters, for tests that need predictable phrase splitting."""
    return ExtractionConfig(
        stopwords=frozenset({"a", "the", "is", "of", "and"}),
        noise_patterns=(),
    )
