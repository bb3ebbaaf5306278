"""Assemble stage outputs into a situation report; export it as JSON or HTML.

The JSON form is the canonical artifact (schema id "sitrep/1"): key-sorted,
indented, self-contained. Every citation in any summary resolves to a
context, every context to an embedded article record, so a report file can
be served or rendered with no access to the original corpus.
"""

from __future__ import annotations

import html
import json
import logging
from dataclasses import dataclass, field

from .clustering import MAX_HEADLINE_CHARS, Chapter
from .corpus import NewsArticle, Timespan
from .errors import DanglingReference, IoError
from .extraction import ClaimContext
from .questions import StrategicQuestion
from .summarize import DetailLevel, GroundedSummary

SCHEMA_VERSION = "sitrep/1"

NO_RELEVANT_CONTEXTS = "no_relevant_contexts"


@dataclass(frozen=True)
class SectionBuild:
    question: StrategicQuestion
    contexts: list[ClaimContext]
    summaries: dict[DetailLevel, GroundedSummary]
    flags: frozenset[str] = frozenset()


@dataclass(frozen=True)
class ChapterBuild:
    chapter: Chapter
    retrieval_query: str
    sections: list[SectionBuild] = field(default_factory=list)


ALL_LEVELS = tuple(level.value for level in DetailLevel)


def assemble_report(
    spans: list[tuple[Timespan, list[ChapterBuild]]],
    articles: dict[str, NewsArticle],
    bias: dict[str, str],
    scenario_name: str,
    generated_at: str,
    provenance: dict,
    required_levels: tuple[str, ...] = ALL_LEVELS,
) -> dict:
    """Build the canonical report dict from pipeline stage outputs.

    Chapters are ordered by timespan then cluster size (largest first);
    sections keep question order. Any identifier that does not resolve is
    a hard error, never a silently dropped node. Every section with
    contexts must carry a summary for each of `required_levels`.
    """
    used_article_ids: set[str] = set()
    span_nodes = []
    for span, chapter_builds in spans:
        ordered = sorted(
            chapter_builds,
            key=lambda cb: (-len(cb.chapter.cluster.member_ids), min(cb.chapter.cluster.member_ids)),
        )
        chapter_nodes = []
        for c_idx, build in enumerate(ordered):
            chapter_id = f"ts{span.index}-c{c_idx}"
            chapter_nodes.append(_chapter_node(chapter_id, build, articles, used_article_ids, required_levels))
        span_nodes.append(
            {
                "index": span.index,
                "start_date": span.start_date.isoformat(),
                "end_date": span.end_date.isoformat(),
                "weeks": span.weeks,
                "chapters": chapter_nodes,
            }
        )

    article_nodes = {}
    for article_id in sorted(used_article_ids):
        a = articles[article_id]
        article_nodes[article_id] = {
            "id": a.id,
            "source": a.source_name,
            "url": a.url,
            "date": a.published_at.isoformat(),
            "title": a.title,
            "kind": a.kind,
            "bias": bias.get(a.id, "unknown"),
        }

    return {
        "schema": SCHEMA_VERSION,
        "scenario": scenario_name,
        "generated_at": generated_at,
        "provenance": provenance,
        "articles": article_nodes,
        "timespans": span_nodes,
    }


def _chapter_node(
    chapter_id: str, build: ChapterBuild, articles, used: set[str], required_levels: tuple[str, ...]
) -> dict:
    chapter = build.chapter
    for article_id in sorted(chapter.expanded_article_ids | chapter.cluster.member_ids):
        if article_id not in articles:
            raise DanglingReference("article", article_id)
        used.add(article_id)
    if not build.sections:
        logging.getLogger(__name__).warning("chapter %s has no sections", chapter_id)
    section_nodes = []
    for s_idx, section in enumerate(build.sections):
        section_nodes.append(_section_node(f"{chapter_id}-s{s_idx}", section, articles, used, required_levels))
    return {
        "id": chapter_id,
        "headline": chapter.headline,
        "member_ids": sorted(chapter.cluster.member_ids),
        "expanded_article_ids": sorted(chapter.expanded_article_ids),
        "retrieval_query": build.retrieval_query,
        "sections": section_nodes,
    }


def _section_node(
    section_id: str, section: SectionBuild, articles, used: set[str], required_levels: tuple[str, ...]
) -> dict:
    flags = sorted(section.flags)
    if not section.contexts and NO_RELEVANT_CONTEXTS not in flags:
        flags.append(NO_RELEVANT_CONTEXTS)
    context_nodes = []
    for x_idx, ctx in enumerate(section.contexts, start=1):
        if ctx.article_id not in articles:
            raise DanglingReference("article", ctx.article_id)
        used.add(ctx.article_id)
        context_nodes.append(
            {
                "id": f"{section_id}-x{x_idx}",
                "article_id": ctx.article_id,
                "answer_span": list(ctx.answer_span),
                "window_text": ctx.window_text,
                "window_range": list(ctx.window_range),
                "validation_score": ctx.validation_score,
                "extraction_confidence": ctx.extraction_confidence,
                "source_bias": ctx.source_bias,
            }
        )
    summary_nodes = {}
    for level, summary in section.summaries.items():
        for sent in summary.sentences:
            for k in sent.citations:
                if not 1 <= k <= len(section.contexts):
                    raise DanglingReference("context", f"{section_id}[{k}]")
        summary_nodes[level.value] = {
            "raw_text": summary.raw_text,
            "dangling_citations": summary.dangling_citations,
            "sentences": [
                {"text": s.text, "citations": list(s.citations)} for s in summary.sentences
            ],
        }
    if section.contexts:
        missing = [name for name in required_levels if name not in summary_nodes]
        if missing:
            raise DanglingReference("summary_level", f"{section_id}:{','.join(missing)}")
    return {
        "id": section_id,
        "question": {
            "id": section.question.qid or section_id,
            "text": section.question.text,
            "set_index": section.question.set_index,
        },
        "flags": flags,
        "contexts": context_nodes,
        "summaries": summary_nodes,
    }


# ---------------------------------------------------------------------------
# Canonical serialization


def dumps_canonical(report: dict) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, UTF-8."""
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads_report(text: str) -> dict:
    report = json.loads(text)
    validate_report(report)
    return report


def validate_report(report: dict) -> None:
    """Check schema id, headline caps, and referential closure."""
    if report.get("schema") != SCHEMA_VERSION:
        raise DanglingReference("schema", str(report.get("schema")))
    articles = report.get("articles", {})
    for span in report.get("timespans", []):
        for chapter in span["chapters"]:
            if not chapter["headline"] or len(chapter["headline"]) > MAX_HEADLINE_CHARS:
                raise ValueError(f"chapter {chapter['id']} headline violates the 35-char cap")
            for article_id in chapter["member_ids"] + chapter["expanded_article_ids"]:
                if article_id not in articles:
                    raise DanglingReference("article", article_id)
            for section in chapter["sections"]:
                n = len(section["contexts"])
                for ctx in section["contexts"]:
                    if ctx["article_id"] not in articles:
                        raise DanglingReference("article", ctx["article_id"])
                for level, summary in section["summaries"].items():
                    for sent in summary["sentences"]:
                        for k in sent["citations"]:
                            if not 1 <= k <= n:
                                raise DanglingReference("context", f"{section['id']}[{k}]")


def index_report(report: dict) -> dict[str, dict[str, dict]]:
    """Id -> node lookup tables for chapters, sections, and contexts."""
    chapters: dict[str, dict] = {}
    sections: dict[str, dict] = {}
    contexts: dict[str, dict] = {}
    for span in report.get("timespans", []):
        for chapter in span["chapters"]:
            chapters[chapter["id"]] = chapter
            for section in chapter["sections"]:
                sections[section["id"]] = section
                for ctx in section["contexts"]:
                    contexts[ctx["id"]] = ctx
    return {"chapters": chapters, "sections": sections, "contexts": contexts}


# ---------------------------------------------------------------------------
# Export


def export(report: dict, format: str) -> bytes:
    """Serialize the report for distribution. JSON is canonical; HTML is a
    static single-file rendering with anchors per chapter/section/claim."""
    if format == "json":
        return dumps_canonical(report).encode("utf-8")
    if format == "html":
        return render_html(report).encode("utf-8")
    raise ValueError(f"unknown export format: {format}")


def write_export(report: dict, format: str, path) -> None:
    import os
    import tempfile

    data = export(report, format)
    directory = os.path.dirname(os.fspath(path)) or "."
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except OSError as exc:
        raise IoError(str(exc)) from exc


_LEVEL_TITLES = {
    "less_detailed": "Brief (2-3 sentences)",
    "normal": "Standard (4-6 sentences)",
    "more_detailed": "Extended (2 paragraphs)",
}

_CSS = """
body { font-family: Georgia, serif; max-width: 60rem; margin: 2rem auto; padding: 0 1rem; color: #1a1a1a; }
h1 { border-bottom: 3px double #444; padding-bottom: .4rem; }
h2 { margin-top: 2.2rem; color: #30423c; }
h3 { margin-bottom: .2rem; }
.meta { color: #666; font-size: .85rem; }
.section { margin: 1rem 0 1.6rem 1rem; border-left: 3px solid #d9d2c4; padding-left: 1rem; }
.summary { margin: .4rem 0; }
.level { font-variant: small-caps; color: #666; margin-right: .4rem; }
.context { background: #f6f4ef; border: 1px solid #e0dbd0; padding: .5rem .8rem; margin: .5rem 0; font-size: .92rem; }
.badge { display: inline-block; padding: 0 .45rem; border-radius: .6rem; font-size: .75rem; color: #fff; vertical-align: middle; }
.badge.left, .badge.lean_left { background: #3b6ea5; }
.badge.center { background: #7a7a7a; }
.badge.right, .badge.lean_right { background: #a54242; }
.badge.unknown { background: #b5a76f; }
.cite { font-size: .8rem; color: #30423c; text-decoration: none; }
.flag { color: #a05050; font-style: italic; }
"""


def render_html(report: dict) -> str:
    """Static one-file rendering of the whole report tree."""
    esc = html.escape
    parts = [
        "<!DOCTYPE html>",
        '<html lang="en"><head><meta charset="utf-8">',
        f"<title>{esc(report['scenario'])}</title>",
        f"<style>{_CSS}</style></head><body>",
        f"<h1>{esc(report['scenario'])}</h1>",
        f'<p class="meta">generated {esc(report["generated_at"])} &middot; schema {esc(report["schema"])}</p>',
    ]
    articles = report["articles"]
    for span in report["timespans"]:
        parts.append(
            f'<h2 id="timespan-{span["index"]}">Timespan {span["index"] + 1}: '
            f'{esc(span["start_date"])} to {esc(span["end_date"])}</h2>'
        )
        for chapter in span["chapters"]:
            parts.append(f'<h3 id="chapter-{esc(chapter["id"])}">{esc(chapter["headline"])}</h3>')
            parts.append(
                f'<p class="meta">{len(chapter["member_ids"])} clustered snippets, '
                f'{len(chapter["expanded_article_ids"])} articles</p>'
            )
            for section in chapter["sections"]:
                parts.append(f'<div class="section" id="section-{esc(section["id"])}">')
                parts.append(f'<h4 id="question-{esc(section["id"])}">{esc(section["question"]["text"])}</h4>')
                if NO_RELEVANT_CONTEXTS in section["flags"]:
                    parts.append('<p class="flag">No relevant contexts were found for this question.</p>')
                for level in ("less_detailed", "normal", "more_detailed"):
                    summary = section["summaries"].get(level)
                    if summary is None:
                        continue
                    body = _render_summary_text(summary, section)
                    parts.append(
                        f'<p class="summary"><span class="level">{esc(_LEVEL_TITLES[level])}</span> {body}</p>'
                    )
                for ctx in section["contexts"]:
                    a = articles[ctx["article_id"]]
                    parts.append(
                        f'<div class="context" id="context-{esc(ctx["id"])}">'
                        f'<span class="badge {esc(ctx["source_bias"])}">{esc(ctx["source_bias"])}</span> '
                        f'<strong>{esc(a["source"])}</strong>, {esc(a["date"])} &middot; '
                        f'score {ctx["validation_score"]:.2f} &middot; '
                        f'<a href="{esc(a["url"])}">{esc(a["title"])}</a><br>{esc(ctx["window_text"])}</div>'
                    )
                parts.append("</div>")
    parts.append("</body></html>")
    return "\n".join(parts)


def _render_summary_text(summary: dict, section: dict) -> str:
    """Sentence text with [k] markers turned into anchors onto contexts."""
    import re

    rendered = []
    for sent in summary["sentences"]:
        text = html.escape(sent["text"])

        def link(match: re.Match) -> str:
            k = int(match.group(1))
            if 1 <= k <= len(section["contexts"]):
                target = section["contexts"][k - 1]["id"]
                return f'<a class="cite" href="#context-{html.escape(target)}">[{k}]</a>'
            return match.group(0)

        rendered.append(re.sub(r"\[(\d+)\]", link, text))
    return " ".join(rendered)
