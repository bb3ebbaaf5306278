// Acceptance-style checks for the viewer: load the fixture report through
// the API client, walk the full navigation surface, and observe requests.

import { describe, expect, it } from "vitest";

import { ReportApi } from "../src/api.js";
import { App } from "../src/app.js";
import { loadFixtureReport, recordingFetch, type RecordedRequest } from "./helpers.js";

const fixture = loadFixtureReport();

async function loadApp(requests: RecordedRequest[]): Promise<App> {
  const api = new ReportApi("http://report-service", recordingFetch(fixture, requests));
  return new App(await api.fetchReport());
}

describe("viewer acceptance", () => {
  it("loads the fixture report from the API and renders the timeline index", async () => {
    const requests: RecordedRequest[] = [];
    const app = await loadApp(requests);
    const html = app.html();
    for (const span of fixture.timespans) {
      expect(html).toContain(`data-timespan-index="${span.index}"`);
      for (const chapter of span.chapters) {
        expect(html).toContain(chapter.headline);
      }
    }
  });

  it("navigates timeline -> chapter -> section", async () => {
    const app = await loadApp([]);
    for (const span of fixture.timespans) {
      for (const chapter of span.chapters) {
        app.dispatch({ kind: "select-chapter", chapterId: chapter.id });
        let html = app.html();
        for (const section of chapter.sections) {
          expect(html).toContain(`data-section-id="${section.id}"`);
        }
        for (const section of chapter.sections) {
          app.dispatch({ kind: "select-section", sectionId: section.id });
          expect(app.state.sectionId).toBe(section.id);
          html = app.html();
          expect(html).toContain(section.question.text.replace(/&/g, "&amp;"));
        }
      }
    }
  });

  it("detail toggle switches among exactly three variants without refetching", async () => {
    const requests: RecordedRequest[] = [];
    const app = await loadApp(requests);
    const section = fixture.timespans[0].chapters[0].sections[0];
    app.dispatch({ kind: "select-section", sectionId: section.id });
    const variants = new Set<string>();
    for (const level of ["less_detailed", "normal", "more_detailed"] as const) {
      const summaryOnly = app.dispatch({ kind: "set-detail", level });
      expect(summaryOnly).toBe(true);
      const pane = app.summaryPaneHtml();
      expect(pane).toContain(`data-level="${level}" aria-pressed="true"`);
      expect(pane).toContain(section.summaries[level]!.sentences[0].citations.length > 0 ? "cite" : "summary");
      variants.add(pane);
    }
    expect(variants.size).toBe(3);
    expect(requests.length).toBe(1); // the initial /report load only
  });

  it("clicking each citation opens the correct context with metadata and bias badge", async () => {
    const app = await loadApp([]);
    let checked = 0;
    for (const span of fixture.timespans) {
      for (const chapter of span.chapters) {
        for (const section of chapter.sections) {
          app.dispatch({ kind: "select-section", sectionId: section.id });
          for (const summary of Object.values(section.summaries)) {
            for (const sentence of summary.sentences) {
              for (const k of sentence.citations) {
                const context = section.contexts[k - 1];
                app.dispatch({ kind: "toggle-claim", contextId: context.id });
                const html = app.html();
                const article = fixture.articles[context.article_id];
                expect(html).toContain(`data-context-id="${context.id}"`);
                expect(html).toContain(article.source);
                expect(html).toContain(article.url);
                expect(html).toContain(`bias-${article.bias}`);
                app.dispatch({ kind: "toggle-claim", contextId: context.id }); // close again
                checked += 1;
              }
            }
          }
        }
      }
    }
    expect(checked).toBeGreaterThan(50);
  });

  it("issues zero mutation requests across a full browsing session", async () => {
    const requests: RecordedRequest[] = [];
    const app = await loadApp(requests);
    for (const span of fixture.timespans) {
      for (const chapter of span.chapters) {
        app.dispatch({ kind: "select-chapter", chapterId: chapter.id });
        for (const section of chapter.sections) {
          app.dispatch({ kind: "select-section", sectionId: section.id });
          app.dispatch({ kind: "set-detail", level: "more_detailed" });
          for (const context of section.contexts) {
            app.dispatch({ kind: "toggle-claim", contextId: context.id });
          }
          app.html();
        }
      }
    }
    expect(requests.every((r) => r.method === "GET")).toBe(true);
  });
});
