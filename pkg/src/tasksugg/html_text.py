"""Best-effort extraction of main article text from HTML.

Strips markup, drops script/style/head content entirely, turns block
boundaries into newlines, and decodes character references. Never raises on
malformed input; the worst case is a cruder plain-text rendering.
"""

from __future__ import annotations

import re
from html.parser import HTMLParser

_SKIP_CONTENT = {
    "script",
    "style",
    "noscript",
    "template",
    "head",
    "svg",
    "iframe",
    "object",
}

_BLOCK = {
    "p",
    "div",
    "br",
    "li",
    "ul",
    "ol",
    "tr",
    "td",
    "th",
    "table",
    "h1",
    "h2",
    "h3",
    "h4",
    "h5",
    "h6",
    "section",
    "article",
    "header",
    "footer",
    "nav",
    "aside",
    "main",
    "blockquote",
    "pre",
    "figure",
    "figcaption",
    "form",
    "hr",
    "title",
}


class _TextCollector(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.chunks: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_CONTENT:
            self._skip_depth += 1
        elif tag in _BLOCK:
            self.chunks.append("\n")

    def handle_endtag(self, tag):
        if tag in _SKIP_CONTENT and self._skip_depth > 0:
            self._skip_depth -= 1
        elif tag in _BLOCK:
            self.chunks.append("\n")

    def handle_data(self, data):
        if self._skip_depth == 0 and data:
            self.chunks.append(data)


def _tidy(raw: str) -> str:
    lines = []
    for line in raw.split("\n"):
        line = " ".join(line.split())
        if line:
            lines.append(line)
    return "\n".join(lines)


def extract_main_text(html: str) -> str:
    """Markup-free plain text with block boundaries as newlines."""
    try:
        collector = _TextCollector()
        collector.feed(html)
        collector.close()
        return _tidy("".join(collector.chunks))
    except Exception:
        # HTMLParser is lenient, but guard anyway: fall back to a bare strip.
        return _tidy(re.sub(r"<[^>]*>", " ", html))
