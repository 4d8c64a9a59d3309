"""Live adapters for the ten sources.

Each source type maps onto a provider call: suggestion APIs return
suggestion strings directly; web-search adapters return (title, snippet,
url) triples; full-document adapters additionally download each result page
and extract its main text; the how-to adapter is a site-restricted web
search against the how-to site, since those articles have no dedicated API.

Adapters are optional plumbing: the bundled fixture store keeps every test
and demo offline. All HTTP goes through an injectable ``http_get`` callable
so failures can be simulated without a network.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone

from .html_text import extract_main_text
from .model import InitialQuery, RetrievedDocument, SourceDescriptor
from .snapshots import SnapshotRecord

WIKIHOW_DOMAIN = "www.wikihow.com"


class NetworkError(RuntimeError):
    """Transient provider failure; the caller may retry."""


class AdapterUnavailable(NetworkError):
    """The adapter cannot run at all (missing key, unsupported engine)."""


@dataclass(frozen=True)
class AdapterSettings:
    google_api_key: str = ""
    google_cx: str = ""
    bing_api_key: str = ""
    wikihow_engine: str = "duckduckgo"
    timeout: float = 10.0
    page_timeout: float = 10.0
    max_body_bytes: int = 2_000_000
    user_agent: str = "tasksugg/0.1 (+research prototype)"

    @classmethod
    def from_config(cls, section: dict | None = None, env=os.environ):
        section = dict(section or {})
        for field_name, var in (
            ("google_api_key", "TASKSUGG_GOOGLE_API_KEY"),
            ("google_cx", "TASKSUGG_GOOGLE_CX"),
            ("bing_api_key", "TASKSUGG_BING_API_KEY"),
        ):
            if env.get(var):
                section[field_name] = env[var]
        allowed = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in section.items() if k in allowed})


def _requests_get(url, params=None, headers=None, timeout=10.0, max_bytes=None):
    """Default transport. Returns (status_code, text). Raises NetworkError."""
    import requests

    try:
        with requests.get(
            url, params=params, headers=headers, timeout=timeout, stream=True
        ) as resp:
            if max_bytes is None:
                return resp.status_code, resp.text
            chunks, size = [], 0
            for chunk in resp.iter_content(chunk_size=65536):
                chunks.append(chunk)
                size += len(chunk)
                if size >= max_bytes:
                    break
            body = b"".join(chunks)[:max_bytes]
            encoding = resp.encoding or "utf-8"
            return resp.status_code, body.decode(encoding, errors="replace")
    except requests.RequestException as exc:
        raise NetworkError(f"GET {url} failed: {exc}") from exc


def _get_json(http, url, params, headers, timeout):
    status, text = http(url, params=params, headers=headers, timeout=timeout)
    if status != 200:
        raise NetworkError(f"GET {url} returned HTTP {status}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"GET {url} returned malformed JSON") from exc


def fetch_suggestions(engine, query, k, settings, http):
    """Suggestion strings from one engine's completion endpoint."""
    headers = {"User-Agent": settings.user_agent}
    if engine == "google":
        data = _get_json(
            http,
            "https://suggestqueries.google.com/complete/search",
            {"client": "firefox", "q": query},
            headers,
            settings.timeout,
        )
    elif engine == "bing":
        data = _get_json(
            http,
            "https://api.bing.com/osjson.aspx",
            {"query": query},
            headers,
            settings.timeout,
        )
    elif engine == "duckduckgo":
        data = _get_json(
            http,
            "https://duckduckgo.com/ac/",
            {"q": query, "type": "list"},
            headers,
            settings.timeout,
        )
    else:
        raise AdapterUnavailable(f"no suggestion adapter for engine {engine!r}")

    # OSJSON shape [query, [s, ...]]; duckduckgo may answer [{"phrase": s}, ...]
    if isinstance(data, list) and data and isinstance(data[0], dict):
        suggestions = [d.get("phrase", "") for d in data]
    elif isinstance(data, list) and len(data) > 1 and isinstance(data[1], list):
        suggestions = [str(s) for s in data[1]]
    else:
        suggestions = []
    return [s for s in suggestions if s.strip()][:k]


def fetch_web_results(engine, query, k, settings, http):
    """(title, snippet, url) triples from one engine's web search."""
    headers = {"User-Agent": settings.user_agent}
    if engine == "google":
        if not (settings.google_api_key and settings.google_cx):
            raise AdapterUnavailable("google web search needs api key and cx")
        data = _get_json(
            http,
            "https://www.googleapis.com/customsearch/v1",
            {
                "key": settings.google_api_key,
                "cx": settings.google_cx,
                "q": query,
                "num": min(k, 10),
            },
            headers,
            settings.timeout,
        )
        items = data.get("items") or []
        results = [
            (it.get("title", ""), it.get("snippet", ""), it.get("link", ""))
            for it in items
        ]
    elif engine == "bing":
        if not settings.bing_api_key:
            raise AdapterUnavailable("bing web search needs an api key")
        data = _get_json(
            http,
            "https://api.bing.microsoft.com/v7.0/search",
            {"q": query, "count": k},
            {**headers, "Ocp-Apim-Subscription-Key": settings.bing_api_key},
            settings.timeout,
        )
        items = (data.get("webPages") or {}).get("value") or []
        results = [
            (it.get("name", ""), it.get("snippet", ""), it.get("url", ""))
            for it in items
        ]
    elif engine == "duckduckgo":
        status, text = http(
            "https://html.duckduckgo.com/html/",
            params={"q": query},
            headers=headers,
            timeout=settings.timeout,
        )
        if status != 200:
            raise NetworkError(f"duckduckgo html search returned HTTP {status}")
        results = _parse_ddg_html(text)
    else:
        raise AdapterUnavailable(f"no web search adapter for engine {engine!r}")
    return results[:k]


def _parse_ddg_html(text):
    import re

    anchors = re.findall(
        r'<a[^>]*class="result__a"[^>]*href="([^"]+)"[^>]*>(.*?)</a>',
        text,
        re.DOTALL,
    )
    snippets = re.findall(
        r'<a[^>]*class="result__snippet"[^>]*>(.*?)</a>', text, re.DOTALL
    )
    results = []
    for i, (href, title_html) in enumerate(anchors):
        snippet_html = snippets[i] if i < len(snippets) else ""
        results.append(
            (extract_main_text(title_html), extract_main_text(snippet_html), href)
        )
    return results


def _fetch_page_text(url, settings, http):
    headers = {"User-Agent": settings.user_agent}
    status, text = http(
        url,
        params=None,
        headers=headers,
        timeout=settings.page_timeout,
        max_bytes=settings.max_body_bytes,
    )
    if status != 200:
        raise NetworkError(f"GET {url} returned HTTP {status}")
    return extract_main_text(text)


def _url_doc_id(url: str) -> str:
    return hashlib.sha1(url.encode("utf-8")).hexdigest()[:12]


def fetch(
    source: SourceDescriptor,
    initial: InitialQuery,
    k: int,
    settings: AdapterSettings | None = None,
    http=None,
    now=None,
) -> SnapshotRecord:
    """Fetch the live top-k response for one source.

    An empty provider answer is a valid zero-document record; transport and
    provider failures raise NetworkError and nothing is persisted here.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    settings = settings or AdapterSettings()
    http = http or _requests_get
    now = now or (lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    query = initial.text

    documents: list[RetrievedDocument] = []
    if source.source_type == "QS":
        for rank, text in enumerate(
            fetch_suggestions(source.engine, query, k, settings, http), start=1
        ):
            documents.append(
                RetrievedDocument(
                    doc_id=f"{source.source_id}:{rank}",
                    source=source,
                    rank=rank,
                    title="",
                    body=text,
                    url="",
                )
            )
    elif source.source_type == "WS":
        for rank, (title, snippet, url) in enumerate(
            fetch_web_results(source.engine, query, k, settings, http), start=1
        ):
            documents.append(
                RetrievedDocument(
                    doc_id=f"{source.source_id}:{rank}",
                    source=source,
                    rank=rank,
                    title=title,
                    body=snippet,
                    url=url,
                )
            )
    elif source.source_type in ("WD", "WH"):
        if source.source_type == "WD":
            engine = source.engine
            results = fetch_web_results(engine, query, k, settings, http)
        else:
            engine = settings.wikihow_engine
            site_query = f"{query} site:{WIKIHOW_DOMAIN}"
            results = [
                r
                for r in fetch_web_results(engine, site_query, k, settings, http)
                if WIKIHOW_DOMAIN in r[2]
            ]
        rank = 0
        for title, _snippet, url in results:
            if not url:
                continue
            try:
                body = _fetch_page_text(url, settings, http)
            except NetworkError:
                continue  # dead link; keep the remaining results, ranks stay contiguous
            rank += 1
            documents.append(
                RetrievedDocument(
                    doc_id=_url_doc_id(url),
                    source=source,
                    rank=rank,
                    title=title,
                    body=body,
                    url=url,
                )
            )
            if rank >= k:
                break
    else:
        raise AdapterUnavailable(f"no adapter for source type {source.source_type!r}")

    return SnapshotRecord(
        topic_id=initial.topic_id,
        source=source,
        fetched_at=now(),
        documents=tuple(documents[:k]),
    )
