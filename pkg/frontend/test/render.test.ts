import { describe, expect, it } from "vitest";

import { renderApp, renderError, renderSection, renderSummaryPane } from "../src/render.js";
import { indexReport, initialState, selectSection, toggleClaim } from "../src/state.js";
import type { Report } from "../src/types.js";
import { loadFixtureReport } from "./helpers.js";

const report = loadFixtureReport();
const idx = indexReport(report);
const firstSection = report.timespans[0].chapters[0].sections[0];

describe("timeline rendering", () => {
  it("lists every timespan chronologically with its chapter headlines", () => {
    const html = renderApp(initialState(), idx);
    let cursor = -1;
    for (const span of report.timespans) {
      const pos = html.indexOf(`${span.start_date} &ndash; ${span.end_date}`);
      expect(pos).toBeGreaterThan(cursor);
      cursor = pos;
      for (const chapter of span.chapters) {
        expect(html).toContain(`data-chapter-id="${chapter.id}"`);
      }
    }
  });

  it("renders an explicit empty state for a report without chapters", () => {
    const empty: Report = { ...report, timespans: [{ ...report.timespans[0], chapters: [] }] };
    const html = renderApp(initialState(), indexReport(empty));
    expect(html).toContain("No chapters in this report.");
  });

  it("renders the error banner with a retry control", () => {
    const html = renderError("connection refused");
    expect(html).toContain("connection refused");
    expect(html).toContain('data-action="retry"');
  });
});

describe("summary pane", () => {
  it("offers exactly three detail toggles", () => {
    const state = selectSection(initialState(), firstSection.id, idx);
    const html = renderSummaryPane(firstSection, state);
    const toggles = html.match(/data-action="set-detail"/g) ?? [];
    expect(toggles.length).toBe(3);
    expect(html).toContain('data-level="less_detailed"');
    expect(html).toContain('data-level="normal"');
    expect(html).toContain('data-level="more_detailed"');
  });

  it("marks the active level as pressed", () => {
    const state = { ...selectSection(initialState(), firstSection.id, idx), detailLevel: "more_detailed" as const };
    const html = renderSummaryPane(firstSection, state);
    expect(html).toContain('data-level="more_detailed" aria-pressed="true"');
    expect(html).toContain('data-level="normal" aria-pressed="false"');
  });

  it("renders every citation as a focusable button", () => {
    const state = selectSection(initialState(), firstSection.id, idx);
    const html = renderSummaryPane(firstSection, state);
    const summary = firstSection.summaries.normal!;
    const markerCount = summary.sentences.reduce(
      (n, s) => n + (s.text.match(/\[\d+\]/g) ?? []).length,
      0,
    );
    const buttons = html.match(/<button type="button" class="cite"/g) ?? [];
    expect(buttons.length).toBe(markerCount);
    expect(markerCount).toBeGreaterThan(0);
  });

  it("disables levels and explains when a section has no contexts", () => {
    const flagged = idx.report.timespans
      .flatMap((s) => s.chapters)
      .flatMap((c) => c.sections)
      .find((s) => s.flags.includes("no_relevant_contexts"));
    expect(flagged).toBeDefined();
    const state = selectSection(initialState(), flagged!.id, idx);
    const html = renderSummaryPane(flagged!, state);
    expect(html).toContain("No relevant contexts");
    expect((html.match(/ disabled>/g) ?? []).length).toBe(3);
  });
});

describe("claim tracing", () => {
  it("opens the cited context with source metadata and bias badge", () => {
    const context = firstSection.contexts[0];
    let state = selectSection(initialState(), firstSection.id, idx);
    state = toggleClaim(state, context.id, idx);
    const html = renderSection(firstSection, state, idx);
    const article = report.articles[context.article_id];
    expect(html).toContain(`data-context-id="${context.id}"`);
    expect(html).toContain(article.source);
    expect(html).toContain(article.url);
    expect(html).toContain(`bias-${article.bias}`);
    expect(html).toContain(context.window_text.slice(0, 40));
    expect(html).toContain("score");
  });

  it("highlights the summary fragment citing the opened claim", () => {
    const context = firstSection.contexts[0];
    let state = selectSection(initialState(), firstSection.id, idx);
    state = toggleClaim(state, context.id, idx);
    const html = renderSection(firstSection, state, idx);
    expect(html).toContain('class="sentence highlight"');
  });

  it("renders the integrity warning for dangling citations", () => {
    let state = selectSection(initialState(), firstSection.id, idx);
    state = toggleClaim(state, "nonexistent-ctx", idx);
    const html = renderSection(firstSection, state, idx);
    expect(html).toContain("Report integrity problem");
  });

  it("escapes report-provided text", () => {
    const hostile = {
      ...firstSection,
      question: { ...firstSection.question, text: "What about <script>alert(1)</script>?" },
    };
    const state = selectSection(initialState(), firstSection.id, idx);
    const html = renderSection(hostile, state, idx);
    expect(html).not.toContain("<script>alert(1)</script>");
    expect(html).toContain("&lt;script&gt;");
  });
});
