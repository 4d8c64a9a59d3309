import pytest
from fastapi.testclient import TestClient

from tasksugg import service as service_module
from tasksugg.adapters import NetworkError
from tasksugg.config import PipelineConfig
from tasksugg.model import RetrievedDocument, source_for_id
from tasksugg.service import ServiceSettings, create_app
from tasksugg.snapshots import SnapshotRecord, SnapshotStore


@pytest.fixture()
def client(fixtures_dir):
    settings = ServiceSettings(
        store_path=fixtures_dir / "store",
        topics_path=fixtures_dir / "topics.json",
        config=PipelineConfig(),
    )
    return TestClient(create_app(settings))


class TestSuggest:
    def test_known_query_includes_expected_suggestion(self, client):
        resp = client.get("/suggest", params={"q": "low wedding budget", "n": 20})
        assert resp.status_code == 200
        data = resp.json()
        assert data["query"] == "low wedding budget"
        texts = [s["text"] for s in data["suggestions"]]
        assert "cheap wedding cake" in texts
        hit = next(s for s in data["suggestions"] if s["text"] == "cheap wedding cake")
        assert any(src.startswith("QS") for src in hit["sources"])

    def test_query_itself_never_suggested(self, client):
        resp = client.get("/suggest", params={"q": "low wedding budget", "n": 20})
        texts = [s["text"] for s in resp.json()["suggestions"]]
        assert "low wedding budget" not in texts

    def test_empty_query_is_400(self, client):
        assert client.get("/suggest", params={"q": "  "}).status_code == 400
        assert client.get("/suggest").status_code == 400

    def test_unknown_query_is_404_in_store_mode(self, client):
        resp = client.get("/suggest", params={"q": "completely unseen query"})
        assert resp.status_code == 404
        assert resp.json()["detail"]["reason"] == "no snapshots for query"

    def test_n_truncates(self, client):
        resp = client.get("/suggest", params={"q": "low wedding budget", "n": 3})
        assert len(resp.json()["suggestions"]) <= 3

    def test_invalid_n_is_400(self, client):
        assert (
            client.get("/suggest", params={"q": "low wedding budget", "n": 0}).status_code
            == 400
        )

    def test_repeated_requests_identical(self, client):
        params = {"q": "grow tomatoes indoors", "n": 10}
        first = client.get("/suggest", params=params)
        second = client.get("/suggest", params=params)
        assert first.content == second.content

    def test_scores_descend_with_deterministic_ties(self, client):
        resp = client.get("/suggest", params={"q": "learn guitar online", "n": 20})
        suggestions = resp.json()["suggestions"]
        keys = [(-s["score"], len(s["text"]), s["text"]) for s in suggestions]
        assert keys == sorted(keys)

    def test_live_mode_unavailable_adapters_is_503(
        self, fixtures_dir, monkeypatch
    ):
        def failing_fetch(*args, **kwargs):
            raise NetworkError("no adapters here")

        monkeypatch.setattr(service_module, "fetch", failing_fetch)
        settings = ServiceSettings(
            store_path=fixtures_dir / "store",
            topics_path=fixtures_dir / "topics.json",
            config=PipelineConfig(),
            live=True,
        )
        client = TestClient(create_app(settings))
        resp = client.get("/suggest", params={"q": "completely unseen query"})
        assert resp.status_code == 503

    def test_query_matching_ignores_case_and_spacing(self, client):
        resp = client.get("/suggest", params={"q": "  Low   WEDDING budget "})
        assert resp.status_code == 200


def test_service_agrees_with_generated_run_file(client, fixtures_dir, tmp_path):
    """The HTTP surface and the run-file surface rank identically."""
    from tasksugg.cli import main as cli_main

    out = tmp_path / "check.run"
    assert (
        cli_main(
            [
                "generate",
                "--store",
                str(fixtures_dir / "store"),
                "--topics",
                str(fixtures_dir / "topics.json"),
                "--out",
                str(out),
            ]
        )
        == 0
    )
    run_texts = [
        " ".join(line.split()[3:])
        for line in out.read_text("utf-8").splitlines()
        if line.startswith("T2 ")
    ]
    resp = client.get("/suggest", params={"q": "grow tomatoes indoors", "n": 20})
    service_texts = [s["text"] for s in resp.json()["suggestions"]]
    assert service_texts == run_texts


class TestHealth:
    def test_counts_store_topics(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok", "store_topics": 3}

    def test_empty_store(self, tmp_path):
        settings = ServiceSettings(store_path=tmp_path / "empty")
        client = TestClient(create_app(settings))
        assert client.get("/health").json() == {"status": "ok", "store_topics": 0}

    def test_count_reflects_added_snapshot(self, tmp_path):
        store_dir = tmp_path / "store"
        store = SnapshotStore(store_dir)
        source = source_for_id("QS_google")
        doc = RetrievedDocument("d", source, 1, body="idea one")
        store.save(SnapshotRecord("A", source, "2025-11-05T12:00:00+00:00", (doc,)))
        client = TestClient(create_app(ServiceSettings(store_path=store_dir)))
        assert client.get("/health").json()["store_topics"] == 1
        store.save(SnapshotRecord("B", source, "2025-11-05T12:00:00+00:00", (doc,)))
        assert client.get("/health").json()["store_topics"] == 2
