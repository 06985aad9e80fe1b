"""Tab-delimited article corpora: parsing, keyword filtering, character access.

One article per line.  Default column layout: url, title, body, posting
date, news id, field id.  Only the body participates in any downstream
modeling; all character positions are Unicode scalar values, never bytes.
"""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)

DEFAULT_COLUMNS = {
    "url": 0,
    "title": 1,
    "body": 2,
    "posted": 3,
    "news_id": 4,
    "field_id": 5,
}

# Keyword search condition used to narrow a raw crawl down to articles that
# plausibly mention a journal ("gakushi" / "ronbunshi" / "gakuzyutushi").
DEFAULT_FILTER_TERMS = ("学誌", "論文誌", "学術誌")


class CorpusFormatError(ValueError):
    """A corpus line violates the column layout (strict mode only)."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


@dataclass(frozen=True)
class Diagnostic:
    line_no: int
    reason: str


@dataclass(frozen=True)
class Article:
    """One news item; ``body`` is the character sequence that gets scanned."""

    id: str
    body: str
    meta: dict[str, str] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.body)


@dataclass(frozen=True)
class ArticleSet:
    """Ordered, immutable collection of articles with unique ids."""

    articles: tuple[Article, ...]

    def __post_init__(self):
        seen: set[str] = set()
        for a in self.articles:
            if a.id in seen:
                raise ValueError(f"duplicate article id: {a.id!r}")
            seen.add(a.id)

    def __iter__(self):
        return iter(self.articles)

    def __len__(self) -> int:
        return len(self.articles)

    def __getitem__(self, i: int) -> Article:
        return self.articles[i]

    def by_id(self) -> dict[str, Article]:
        return {a.id: a for a in self.articles}


def to_char_seq(text: str | bytes) -> list[str]:
    """Split text into Unicode scalar values.

    Bytes input is decoded as strict UTF-8; the raised UnicodeDecodeError
    carries the offending byte offset.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return list(text)


def parse_corpus(
    lines,
    column_map: dict[str, int] | None = None,
    *,
    strict: bool = True,
    normalize_nfc: bool = False,
    diagnostics: list[Diagnostic] | None = None,
) -> ArticleSet:
    """Parse a TSV line stream into an ArticleSet.

    Malformed lines (fewer columns than the column map needs, or a duplicate
    article id) abort with CorpusFormatError in strict mode and are skipped
    with a recorded diagnostic otherwise.  ``normalize_nfc`` applies NFC to
    the body only; off by default so bigram identities stay verbatim.
    """
    columns = DEFAULT_COLUMNS if column_map is None else column_map
    if "body" not in columns:
        raise ValueError("column_map must locate the 'body' column")
    width = max(columns.values()) + 1

    def complain(line_no: int, reason: str):
        if strict:
            raise CorpusFormatError(line_no, reason)
        if diagnostics is not None:
            diagnostics.append(Diagnostic(line_no, reason))
        logger.warning("corpus line %d skipped: %s", line_no, reason)

    articles: list[Article] = []
    ids: set[str] = set()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) < width:
            complain(line_no, f"expected at least {width} columns, got {len(fields)}")
            continue
        body = fields[columns["body"]]
        if normalize_nfc:
            body = unicodedata.normalize("NFC", body)
        if "news_id" in columns:
            art_id = fields[columns["news_id"]]
        else:
            art_id = str(line_no)
        if art_id in ids:
            complain(line_no, f"duplicate article id {art_id!r}")
            continue
        meta = {
            name: fields[idx]
            for name, idx in columns.items()
            if name not in ("body", "news_id")
        }
        ids.add(art_id)
        articles.append(Article(id=art_id, body=body, meta=meta))
    return ArticleSet(tuple(articles))


def serialize_corpus(article_set: ArticleSet, column_map: dict[str, int] | None = None) -> str:
    """Inverse of parse_corpus for well-formed input (round-trips bit-exactly)."""
    columns = DEFAULT_COLUMNS if column_map is None else column_map
    width = max(columns.values()) + 1
    out: list[str] = []
    for a in article_set:
        fields = [""] * width
        for name, idx in columns.items():
            if name == "body":
                fields[idx] = a.body
            elif name == "news_id":
                fields[idx] = a.id
            else:
                fields[idx] = a.meta.get(name, "")
        out.append("\t".join(fields))
    return "\n".join(out) + ("\n" if out else "")


def filter_articles(article_set: ArticleSet, terms) -> ArticleSet:
    """Keep articles whose body contains at least one term as a substring."""
    terms = list(terms)
    if not terms:
        raise ValueError("filter terms must be non-empty")
    kept = tuple(a for a in article_set if any(t in a.body for t in terms))
    return ArticleSet(kept)


def load_corpus_file(
    path,
    column_map: dict[str, int] | None = None,
    *,
    strict: bool = True,
    normalize_nfc: bool = False,
    diagnostics: list[Diagnostic] | None = None,
) -> ArticleSet:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(
            fh,
            column_map,
            strict=strict,
            normalize_nfc=normalize_nfc,
            diagnostics=diagnostics,
        )
