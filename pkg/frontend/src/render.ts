// Pure HTML renderers: (state, index) in, markup out. No DOM access here,
// which keeps every view testable as a plain string. Interactive elements
// are real <button>s carrying data-action attributes, so keyboard users
// reach every citation and control without extra wiring.

import type { ReportIndex, ViewState } from "./state.js";
import type { ContextNode, DetailLevel, SectionNode, SummaryNode } from "./types.js";
import { DETAIL_LABELS, DETAIL_LEVELS } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderLoading(): string {
  return `<div class="status" role="status">Loading report&hellip;</div>`;
}

export function renderError(message: string): string {
  return (
    `<div class="status error" role="alert">` +
    `<p>Could not load the report: ${escapeHtml(message)}</p>` +
    `<button type="button" data-action="retry">Retry</button></div>`
  );
}

export function renderApp(state: ViewState, idx: ReportIndex): string {
  const report = idx.report;
  const hasChapters = report.timespans.some((span) => span.chapters.length > 0);
  if (!hasChapters) {
    return (
      `<header><h1>${escapeHtml(report.scenario)}</h1></header>` +
      `<div class="status" role="status">No chapters in this report.</div>`
    );
  }
  return (
    `<header><h1>${escapeHtml(report.scenario)}</h1>` +
    `<p class="meta">generated ${escapeHtml(report.generated_at)}</p></header>` +
    `<div class="layout">` +
    `<nav id="timeline" aria-label="Timelines">${renderTimeline(state, idx)}</nav>` +
    `<main id="content">${renderContent(state, idx)}</main>` +
    `</div>`
  );
}

export function renderTimeline(state: ViewState, idx: ReportIndex): string {
  const spans = [...idx.report.timespans].sort((a, b) => a.index - b.index);
  const blocks = spans.map((span) => {
    const chapters = span.chapters
      .map((chapter) => {
        const current = chapter.id === state.chapterId ? ` aria-current="true"` : "";
        return (
          `<li><button type="button" data-action="select-chapter" data-chapter-id="${chapter.id}"${current}>` +
          `${escapeHtml(chapter.headline)}</button></li>`
        );
      })
      .join("");
    return (
      `<section class="timespan" data-timespan-index="${span.index}">` +
      `<h2>${escapeHtml(span.start_date)} &ndash; ${escapeHtml(span.end_date)}</h2>` +
      `<ul>${chapters || "<li class='empty'>no chapters</li>"}</ul></section>`
    );
  });
  return blocks.join("");
}

function renderContent(state: ViewState, idx: ReportIndex): string {
  if (!state.chapterId) {
    return `<div class="status">Select a chapter to begin.</div>`;
  }
  const chapter = idx.chapters.get(state.chapterId)!;
  const questions = chapter.sections
    .map((section) => {
      const current = section.id === state.sectionId ? ` aria-current="true"` : "";
      return (
        `<li><button type="button" data-action="select-section" data-section-id="${section.id}"${current}>` +
        `${escapeHtml(section.question.text)}</button></li>`
      );
    })
    .join("");
  const sectionPane = state.sectionId
    ? renderSection(idx.sections.get(state.sectionId)!, state, idx)
    : `<div class="status">Select a question.</div>`;
  return (
    `<h2 class="chapter-headline">${escapeHtml(chapter.headline)}</h2>` +
    `<p class="meta">${chapter.member_ids.length} clustered snippets &middot; ` +
    `${chapter.expanded_article_ids.length} articles</p>` +
    `<ul class="questions" aria-label="Strategic questions">${questions}</ul>` +
    `<section id="section-pane">${sectionPane}</section>`
  );
}

export function renderSection(section: SectionNode, state: ViewState, idx: ReportIndex): string {
  const warning = state.integrityWarning
    ? `<div class="integrity-warning" role="alert">Report integrity problem: ${escapeHtml(state.integrityWarning)}</div>`
    : "";
  return (
    `<h3>${escapeHtml(section.question.text)}</h3>` +
    warning +
    `<div id="summary-pane">${renderSummaryPane(section, state)}</div>` +
    `<div id="context-panels">${renderContextPanels(section, state, idx)}</div>`
  );
}

export function renderSummaryPane(section: SectionNode, state: ViewState): string {
  const empty = section.flags.includes("no_relevant_contexts");
  const toggles = DETAIL_LEVELS.map((level) => {
    const pressed = level === state.detailLevel ? "true" : "false";
    const disabled = empty ? " disabled" : "";
    return (
      `<button type="button" data-action="set-detail" data-level="${level}" aria-pressed="${pressed}"${disabled}>` +
      `${DETAIL_LABELS[level]}</button>`
    );
  }).join("");
  if (empty) {
    return (
      `<div class="detail-toggle" role="group" aria-label="Detail level">${toggles}</div>` +
      `<p class="flag-note">No relevant contexts were found for this question, so no summary was generated.</p>`
    );
  }
  const summary = section.summaries[state.detailLevel];
  if (!summary) {
    return `<p class="flag-note">This detail level is not available.</p>`;
  }
  return (
    `<div class="detail-toggle" role="group" aria-label="Detail level">${toggles}</div>` +
    `<div class="summary" data-level="${state.detailLevel}">${renderSummaryText(summary, section, state)}</div>`
  );
}

function renderSummaryText(summary: SummaryNode, section: SectionNode, state: ViewState): string {
  return summary.sentences
    .map((sentence) => {
      const cited = sentence.citations.some((k) => {
        const context = section.contexts[k - 1];
        return context !== undefined && state.expandedClaims.has(context.id);
      });
      const cls = cited ? "sentence highlight" : "sentence";
      const text = escapeHtml(sentence.text).replace(/\[(\d+)\]/g, (match, raw) => {
        const k = Number(raw);
        const context = section.contexts[k - 1];
        const contextId = context ? context.id : `missing-${section.id}-${k}`;
        return (
          `<button type="button" class="cite" data-action="toggle-claim" ` +
          `data-context-id="${contextId}" aria-label="citation ${k}">[${k}]</button>`
        );
      });
      return `<span class="${cls}">${text}</span>`;
    })
    .join(" ");
}

export function renderContextPanels(section: SectionNode, state: ViewState, idx: ReportIndex): string {
  const panels = section.contexts
    .filter((context) => state.expandedClaims.has(context.id))
    .map((context) => renderContextPanel(context, section, idx));
  return panels.join("");
}

export function renderContextPanel(context: ContextNode, section: SectionNode, idx: ReportIndex): string {
  const article = idx.report.articles[context.article_id];
  const k = section.contexts.findIndex((c) => c.id === context.id) + 1;
  const source = article
    ? `<a href="${escapeHtml(article.url)}" rel="noopener">${escapeHtml(article.title)}</a>` +
      ` &middot; <strong>${escapeHtml(article.source)}</strong>, ${escapeHtml(article.date)}`
    : `<em>article record missing</em>`;
  const bias = article ? article.bias : context.source_bias;
  return (
    `<article class="context-panel" data-context-id="${context.id}" aria-label="context ${k}">` +
    `<header>[${k}] <span class="badge bias-${escapeHtml(bias)}">${escapeHtml(bias)}</span> ${source}` +
    ` &middot; score ${context.validation_score.toFixed(2)}</header>` +
    `<p class="window-text">${escapeHtml(context.window_text)}</p>` +
    `</article>`
  );
}
