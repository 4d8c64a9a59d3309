import json

import pytest

from tasksugg.adapters import (
    AdapterSettings,
    AdapterUnavailable,
    NetworkError,
    fetch,
    fetch_suggestions,
    fetch_web_results,
)
from tasksugg.model import InitialQuery, source_for_id

QUERY = InitialQuery("T1", "low wedding budget")
NOW = lambda: "2025-11-05T12:00:00+00:00"  # noqa: E731


class FakeHttp:
    """Canned transport: maps url substrings to (status, body) answers."""

    def __init__(self, responses):
        self.responses = responses
        self.calls = []

    def __call__(self, url, params=None, headers=None, timeout=None, max_bytes=None):
        self.calls.append((url, params))
        for key, answer in self.responses.items():
            if key in url:
                return answer
        raise NetworkError(f"unexpected url {url}")


def osjson(query, suggestions):
    return 200, json.dumps([query, suggestions])


class TestSuggestionAdapters:
    def test_google_osjson_shape(self):
        http = FakeHttp({"suggestqueries.google.com": osjson("q", ["a one", "b two"])})
        settings = AdapterSettings()
        assert fetch_suggestions("google", "q", 10, settings, http) == ["a one", "b two"]

    def test_duckduckgo_phrase_shape(self):
        http = FakeHttp(
            {"duckduckgo.com/ac": (200, json.dumps([{"phrase": "cheap cake"}]))}
        )
        assert fetch_suggestions("duckduckgo", "q", 10, AdapterSettings(), http) == [
            "cheap cake"
        ]

    def test_empty_answer_is_valid(self):
        http = FakeHttp({"api.bing.com": osjson("q", [])})
        assert fetch_suggestions("bing", "q", 10, AdapterSettings(), http) == []

    def test_http_error_raises_network_error(self):
        http = FakeHttp({"suggestqueries.google.com": (500, "oops")})
        with pytest.raises(NetworkError):
            fetch_suggestions("google", "q", 10, AdapterSettings(), http)

    def test_malformed_json_raises_network_error(self):
        http = FakeHttp({"suggestqueries.google.com": (200, "<html>block</html>")})
        with pytest.raises(NetworkError):
            fetch_suggestions("google", "q", 10, AdapterSettings(), http)

    def test_k_caps_results(self):
        http = FakeHttp(
            {"suggestqueries.google.com": osjson("q", [f"s {i}" for i in range(20)])}
        )
        assert len(fetch_suggestions("google", "q", 5, AdapterSettings(), http)) == 5


class TestWebSearchAdapters:
    def test_google_requires_key_and_cx(self):
        with pytest.raises(AdapterUnavailable):
            fetch_web_results("google", "q", 10, AdapterSettings(), FakeHttp({}))

    def test_bing_requires_key(self):
        with pytest.raises(AdapterUnavailable):
            fetch_web_results("bing", "q", 10, AdapterSettings(), FakeHttp({}))

    def test_google_custom_search_shape(self):
        payload = {
            "items": [
                {"title": "T1", "snippet": "S1", "link": "https://x/1"},
                {"title": "T2", "snippet": "S2", "link": "https://x/2"},
            ]
        }
        http = FakeHttp({"googleapis.com/customsearch": (200, json.dumps(payload))})
        settings = AdapterSettings(google_api_key="k", google_cx="c")
        results = fetch_web_results("google", "q", 10, settings, http)
        assert results == [("T1", "S1", "https://x/1"), ("T2", "S2", "https://x/2")]


class TestFetch:
    def test_qs_snapshot_with_contiguous_ranks(self):
        http = FakeHttp(
            {"suggestqueries.google.com": osjson("q", ["cheap cake", "venue list"])}
        )
        record = fetch(
            source_for_id("QS_google"), QUERY, 10, AdapterSettings(), http, NOW
        )
        assert [d.rank for d in record.documents] == [1, 2]
        assert [d.body for d in record.documents] == ["cheap cake", "venue list"]
        assert record.fetched_at == NOW()

    def test_qs_empty_provider_answer_yields_empty_record(self):
        http = FakeHttp({"api.bing.com": osjson("q", [])})
        record = fetch(source_for_id("QS_bing"), QUERY, 10, AdapterSettings(), http, NOW)
        assert record.documents == ()

    def test_provider_outage_raises(self):
        http = FakeHttp({"suggestqueries.google.com": (503, "downtime")})
        with pytest.raises(NetworkError):
            fetch(source_for_id("QS_google"), QUERY, 10, AdapterSettings(), http, NOW)

    def test_wd_fetches_pages_and_extracts_text(self):
        payload = {
            "items": [
                {"title": "Guide", "snippet": "s", "link": "https://pages/one"},
                {"title": "Dead", "snippet": "s", "link": "https://pages/broken"},
                {"title": "More", "snippet": "s", "link": "https://pages/two"},
            ]
        }
        http = FakeHttp(
            {
                "googleapis.com/customsearch": (200, json.dumps(payload)),
                "pages/one": (200, "<p>rent a gown</p>"),
                "pages/broken": (404, "gone"),
                "pages/two": (200, "<p>bake the cake</p>"),
            }
        )
        settings = AdapterSettings(google_api_key="k", google_cx="c")
        record = fetch(source_for_id("WD_google"), QUERY, 10, settings, http, NOW)
        # the dead link is skipped and ranks stay contiguous
        assert [(d.rank, d.body) for d in record.documents] == [
            (1, "rent a gown"),
            (2, "bake the cake"),
        ]

    def test_wh_restricts_to_howto_site(self):
        payload = {
            "items": [
                {"title": "A", "snippet": "s", "link": "https://www.wikihow.com/a"},
                {"title": "B", "snippet": "s", "link": "https://elsewhere.com/b"},
            ]
        }
        http = FakeHttp(
            {
                "googleapis.com/customsearch": (200, json.dumps(payload)),
                "wikihow.com/a": (200, "<p>steps here</p>"),
            }
        )
        settings = AdapterSettings(
            google_api_key="k", google_cx="c", wikihow_engine="google"
        )
        record = fetch(source_for_id("WH"), QUERY, 10, settings, http, NOW)
        assert len(record.documents) == 1
        assert record.documents[0].url == "https://www.wikihow.com/a"
        # the site filter is part of the outgoing query
        search_calls = [p for (u, p) in http.calls if "customsearch" in u]
        assert "site:www.wikihow.com" in search_calls[0]["q"]

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError):
            fetch(source_for_id("QS_google"), QUERY, 0, AdapterSettings(), FakeHttp({}))


def test_settings_env_overrides():
    env = {"TASKSUGG_BING_API_KEY": "from-env"}
    settings = AdapterSettings.from_config({"bing_api_key": "from-file"}, env=env)
    assert settings.bing_api_key == "from-env"
