"""End-to-end report construction: ingest -> cluster -> question -> extract -> summarize -> assemble."""

from __future__ import annotations

import logging
import math
import os
import time
from dataclasses import replace
from datetime import datetime, timezone

from . import clustering
from .clustering import Chapter, EventCluster, cosine_distance
from .config import PipelineConfig
from .corpus import NewsArticle, attach_bias, ingest_corpus, load_bias_csv, partition_timespans
from .errors import DuplicateId
from .extraction import extract_contexts
from .prompts import load_template, template_hash
from .providers import CapabilityRouter, ModelProvider, SamplingParams, mock_backend, remote_backend
from .questions import deduplicate_questions, generate_question_sets
from .report import ChapterBuild, SectionBuild, assemble_report
from .segment import content_tokens
from .summarize import DetailLevel, summarize_section

logger = logging.getLogger(__name__)


def build_provider(cfg: PipelineConfig) -> ModelProvider:
    def make(block: dict) -> ModelProvider:
        backend = block.get("backend", "mock")
        if backend == "mock":
            return mock_backend(seed=block.get("seed", cfg.seed))
        return remote_backend(
            endpoint=block["endpoint"],
            model=block.get("model") or "default",
            api_key_env=block.get("api_key_env", cfg.provider.api_key_env),
            max_in_flight=block.get("max_in_flight", cfg.provider.max_in_flight),
        )

    default = make(
        {
            "backend": cfg.provider.backend,
            "endpoint": cfg.provider.endpoint,
            "model": cfg.provider.model,
            "seed": cfg.seed,
        }
    )
    if not cfg.provider.capabilities:
        return default
    overrides = {cap: make(block) for cap, block in sorted(cfg.provider.capabilities.items())}
    return CapabilityRouter(default, overrides)


def _resolve_generated_at(cfg: PipelineConfig) -> str:
    if cfg.generated_at:
        return cfg.generated_at
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch:
        return datetime.fromtimestamp(int(epoch), tz=timezone.utc).isoformat()
    return datetime.now(tz=timezone.utc).isoformat(timespec="seconds")


def _templates(cfg: PipelineConfig) -> dict[str, str]:
    return {
        name: load_template(name, cfg.prompt_files.get(name))
        for name in ("headline", "questions", "summary")
    }


def _assign_expanded(
    articles: list[NewsArticle],
    clusters: list[EventCluster],
    snippet_docs: dict[str, list[str]],
) -> dict[int, set[str]]:
    """Attach non-clustered articles to their most similar cluster.

    Similarity is cosine against the cluster centroid, using the timespan's
    snippet vocabulary; articles with no vocabulary overlap stay unattached.
    """
    n_docs = len(snippet_docs)
    df: dict[str, int] = {}
    for tokens in snippet_docs.values():
        for term in set(tokens):
            df[term] = df.get(term, 0) + 1
    assignment: dict[int, set[str]] = {i: set() for i in range(len(clusters))}
    for article in articles:
        tokens = content_tokens(article.title + " " + article.body)
        tf: dict[str, int] = {}
        for t in tokens:
            if t in df:
                tf[t] = tf.get(t, 0) + 1
        weights = {t: c * math.log(n_docs / df[t]) for t, c in sorted(tf.items())}
        vec = clustering.TfidfVector.from_weights(weights)
        best_idx, best_dist = None, 1.0
        for idx, cluster in enumerate(clusters):
            d = cosine_distance(vec, cluster.centroid)
            if d < best_dist:
                best_idx, best_dist = idx, d
        if best_idx is None:
            logger.info("article %s has no similarity to any cluster; not attached", article.id)
            continue
        assignment[best_idx].add(article.id)
    return assignment


def build_report_data(cfg: PipelineConfig, provider: ModelProvider | None = None) -> dict:
    """Run the full pipeline per the config and return the report dict."""
    cfg.validate()
    provider = provider if provider is not None else build_provider(cfg)
    templates = _templates(cfg)
    base_params = replace(cfg.sampling, seed=cfg.seed)
    levels = tuple(DetailLevel(name) for name in cfg.detail_levels)

    t0 = time.monotonic()
    articles = ingest_corpus(cfg.corpus)
    by_id = {a.id: a for a in articles}
    if cfg.expanded:
        for extra in ingest_corpus(cfg.expanded):
            if extra.id in by_id:
                raise DuplicateId(extra.id)
            by_id[extra.id] = extra
            articles.append(extra)
        articles.sort(key=lambda a: (a.published_at, a.id))
    bias = attach_bias(articles, load_bias_csv(cfg.bias_csv) if cfg.bias_csv else [])
    logger.info("ingest: %d articles in %.2fs", len(articles), time.monotonic() - t0)

    spans = partition_timespans(articles, cfg.weeks)
    span_builds = []
    for span, members in spans:
        t_span = time.monotonic()
        snippets = [a for a in members if a.kind == "snippet"]
        extras = [a for a in members if a.kind != "snippet"]
        if not snippets:
            logger.warning("timespan %d has no snippets; no chapters", span.index)
            span_builds.append((span, []))
            continue

        snippet_docs = {a.id: content_tokens(a.title + " " + a.body) for a in snippets}
        clusters = clustering.cluster_articles(snippets, cfg.cluster_threshold)
        extra_assignment = _assign_expanded(extras, clusters, snippet_docs)

        ordered = sorted(
            range(len(clusters)),
            key=lambda i: (-len(clusters[i].member_ids), min(clusters[i].member_ids)),
        )
        chapter_builds = []
        for c_pos, c_idx in enumerate(ordered):
            cluster = clusters[c_idx]
            chapter_id = f"ts{span.index}-c{c_pos}"
            headline = clustering.name_chapter(
                cluster, by_id, provider, base_params, prompt_template=templates["headline"]
            )
            chapter = Chapter(
                timespan_index=span.index,
                headline=headline,
                cluster=cluster,
                expanded_article_ids=frozenset(cluster.member_ids | extra_assignment[c_idx]),
            )
            query = clustering.format_retrieval_query(headline, span, cfg.date_style)
            chapter_builds.append(
                _build_chapter_sections(chapter, chapter_id, query, cfg, provider, by_id, bias, base_params, levels, templates)
            )
        span_builds.append((span, chapter_builds))
        logger.info(
            "timespan %d: %d chapters in %.2fs", span.index, len(chapter_builds), time.monotonic() - t_span
        )

    provenance = {
        "config": cfg.to_dict(),
        "provider": provider.identity,
        "seed": cfg.seed,
        "prompt_hashes": {name: template_hash(text) for name, text in templates.items()},
    }
    report = assemble_report(
        span_builds,
        by_id,
        bias,
        scenario_name=cfg.scenario,
        generated_at=_resolve_generated_at(cfg),
        provenance=provenance,
        required_levels=tuple(cfg.detail_levels),
    )
    logger.info("build complete in %.2fs", time.monotonic() - t0)
    return report


def _build_chapter_sections(
    chapter: Chapter,
    chapter_id: str,
    query: str,
    cfg: PipelineConfig,
    provider: ModelProvider,
    by_id: dict[str, NewsArticle],
    bias: dict[str, str],
    base_params: SamplingParams,
    levels: tuple[DetailLevel, ...],
    templates: dict[str, str],
) -> ChapterBuild:
    sets = generate_question_sets(
        chapter,
        by_id,
        n_sets=cfg.n_sets,
        sampling=base_params,
        provider=provider,
        chapter_ref=chapter_id,
        template=templates["questions"],
    )
    unique = deduplicate_questions(sets, provider, threshold=cfg.dedup_threshold)
    chapter_articles = sorted(
        (by_id[i] for i in chapter.expanded_article_ids), key=lambda a: (a.published_at, a.id)
    )
    sections = []
    for s_idx, question in enumerate(unique):
        section_id = f"{chapter_id}-s{s_idx}"
        question = question.with_id(section_id)
        contexts = extract_contexts(
            question,
            chapter_articles,
            provider,
            provider,
            bias=bias,
            sentences_per_snippet=cfg.snippet_size,
            k=cfg.top_k,
            question_ref=section_id,
        )
        if contexts:
            summaries = summarize_section(
                question, contexts, provider, base_params, levels=levels, template=templates["summary"]
            )
            flags: frozenset[str] = frozenset()
        else:
            summaries = {}
            flags = frozenset({"no_relevant_contexts"})
        sections.append(SectionBuild(question=question, contexts=contexts, summaries=summaries, flags=flags))
    return ChapterBuild(chapter=chapter, retrieval_query=query, sections=sections)


def dump_clusters(cfg: PipelineConfig) -> list[dict]:
    """Clustering debug view: per-timespan partitions, no provider calls."""
    cfg.validate()
    articles = ingest_corpus(cfg.corpus)
    dump = []
    for span, members in partition_timespans(articles, cfg.weeks):
        snippets = [a for a in members if a.kind == "snippet"]
        if not snippets:
            dump.append({"timespan": span.index, "clusters": []})
            continue
        clusters = clustering.cluster_articles(snippets, cfg.cluster_threshold)
        dump.append({"timespan": span.index, "clusters": [sorted(c.member_ids) for c in clusters]})
    return dump
