"""Corpus ingestion, timespan partitioning, and source bias metadata."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path

from .errors import DuplicateId, EmptyCorpus, MalformedRecord, UnparseableDate

ARTICLE_KINDS = ("snippet", "full_article")
BIAS_RATINGS = ("left", "lean_left", "center", "lean_right", "right", "unknown")


@dataclass(frozen=True)
class NewsArticle:
    id: str
    source_name: str
    url: str
    published_at: date
    title: str
    body: str
    kind: str  # snippet | full_article

    def __post_init__(self):
        if self.kind not in ARTICLE_KINDS:
            raise ValueError(f"unknown article kind: {self.kind}")
        if not self.body:
            raise ValueError(f"article {self.id} has an empty body")


@dataclass(frozen=True)
class Timespan:
    index: int
    start_date: date
    end_date: date  # exclusive
    weeks: int

    def __post_init__(self):
        if (self.end_date - self.start_date).days != 7 * self.weeks:
            raise ValueError("timespan must cover exactly 7*weeks days")

    def contains(self, d: date) -> bool:
        return self.start_date <= d < self.end_date


@dataclass(frozen=True)
class SourceBiasRating:
    source_name: str
    rating: str

    def __post_init__(self):
        if self.rating not in BIAS_RATINGS:
            raise ValueError(f"unknown bias rating: {self.rating}")


_REQUIRED_FIELDS = ("id", "source", "url", "date", "title", "body", "kind")


def _parse_record(rec: dict, line_no: int) -> NewsArticle:
    missing = [f for f in _REQUIRED_FIELDS if f not in rec]
    if missing:
        raise MalformedRecord(line_no, f"missing fields: {', '.join(missing)}")
    try:
        published = date.fromisoformat(str(rec["date"]))
    except ValueError:
        raise UnparseableDate(str(rec["id"]), str(rec["date"])) from None
    try:
        return NewsArticle(
            id=str(rec["id"]),
            source_name=str(rec["source"]),
            url=str(rec["url"]),
            published_at=published,
            title=str(rec["title"]),
            body=str(rec["body"]),
            kind=str(rec["kind"]),
        )
    except ValueError as exc:
        raise MalformedRecord(line_no, str(exc)) from exc


def ingest_corpus(path: str | Path, format: str = "jsonl") -> list[NewsArticle]:
    """Read a JSONL corpus, validate it, and return date-then-id sorted articles."""
    if format != "jsonl":
        raise ValueError(f"unsupported corpus format: {format}")
    articles: list[NewsArticle] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, "invalid JSON") from exc
            if not isinstance(rec, dict):
                raise MalformedRecord(line_no, "record is not an object")
            article = _parse_record(rec, line_no)
            if article.id in seen:
                raise DuplicateId(article.id)
            seen.add(article.id)
            articles.append(article)
    articles.sort(key=lambda a: (a.published_at, a.id))
    return articles


def export_corpus(articles: list[NewsArticle], path: str | Path) -> None:
    """Write articles back out in the normalized JSONL form (sorted, UTF-8)."""
    ordered = sorted(articles, key=lambda a: (a.published_at, a.id))
    with open(path, "w", encoding="utf-8") as fh:
        for a in ordered:
            fh.write(
                json.dumps(
                    {
                        "id": a.id,
                        "source": a.source_name,
                        "url": a.url,
                        "date": a.published_at.isoformat(),
                        "title": a.title,
                        "body": a.body,
                        "kind": a.kind,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def partition_timespans(
    articles: list[NewsArticle], weeks: int
) -> list[tuple[Timespan, list[NewsArticle]]]:
    """Tile the corpus date range into N-week spans anchored at the earliest date."""
    if not articles:
        raise EmptyCorpus("cannot partition an empty corpus")
    if weeks < 1:
        raise ValueError("weeks must be >= 1")
    dates = [a.published_at for a in articles]
    first, last = min(dates), max(dates)
    step = timedelta(days=7 * weeks)
    spans: list[tuple[Timespan, list[NewsArticle]]] = []
    start = first
    index = 0
    while start <= last:
        span = Timespan(index=index, start_date=start, end_date=start + step, weeks=weeks)
        members = [a for a in articles if span.contains(a.published_at)]
        spans.append((span, members))
        start += step
        index += 1
    return spans


def load_bias_csv(path: str | Path) -> list[SourceBiasRating]:
    """Read `source,rating` CSV rows into bias ratings."""
    ratings: list[SourceBiasRating] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"source", "rating"} <= set(reader.fieldnames):
            raise MalformedRecord(1, "bias CSV must have a `source,rating` header")
        for line_no, row in enumerate(reader, start=2):
            source = (row.get("source") or "").strip()
            rating = (row.get("rating") or "").strip()
            if not source:
                raise MalformedRecord(line_no, "empty source name")
            if source in seen:
                raise MalformedRecord(line_no, f"duplicate rating for source {source}")
            seen.add(source)
            try:
                ratings.append(SourceBiasRating(source_name=source, rating=rating))
            except ValueError as exc:
                raise MalformedRecord(line_no, str(exc)) from exc
    return ratings


def attach_bias(
    articles: list[NewsArticle], ratings: list[SourceBiasRating]
) -> dict[str, str]:
    """Map every article id to its source's bias rating (default: unknown)."""
    by_source = {r.source_name: r.rating for r in ratings}
    return {a.id: by_source.get(a.source_name, "unknown") for a in articles}
