// DOM-free controller: holds the view state for a loaded report and maps
// user actions onto state transitions plus re-rendered markup. main.ts
// wires it to the document; tests drive it directly.

import { renderApp, renderSummaryPane } from "./render.js";
import {
  indexReport,
  initialState,
  selectChapter,
  selectSection,
  selectTimespan,
  toggleClaim,
  toggleDetail,
  type ReportIndex,
  type ViewState,
} from "./state.js";
import type { DetailLevel, Report, SectionNode } from "./types.js";

export type Action =
  | { kind: "select-timespan"; index: number }
  | { kind: "select-chapter"; chapterId: string }
  | { kind: "select-section"; sectionId: string }
  | { kind: "set-detail"; level: DetailLevel }
  | { kind: "toggle-claim"; contextId: string };

export class App {
  state: ViewState;
  readonly idx: ReportIndex;

  constructor(report: Report) {
    this.idx = indexReport(report);
    this.state = initialState();
  }

  /** Apply an action; returns true if only the summary pane needs repainting. */
  dispatch(action: Action): boolean {
    switch (action.kind) {
      case "select-timespan":
        this.state = selectTimespan(this.state, action.index, this.idx);
        return false;
      case "select-chapter":
        this.state = selectChapter(this.state, action.chapterId, this.idx);
        return false;
      case "select-section":
        this.state = selectSection(this.state, action.sectionId, this.idx);
        return false;
      case "set-detail":
        this.state = toggleDetail(this.state, action.level);
        return true;
      case "toggle-claim":
        this.state = toggleClaim(this.state, action.contextId, this.idx);
        return false;
    }
  }

  currentSection(): SectionNode | null {
    return this.state.sectionId ? this.idx.sections.get(this.state.sectionId) ?? null : null;
  }

  html(): string {
    return renderApp(this.state, this.idx);
  }

  summaryPaneHtml(): string {
    const section = this.currentSection();
    return section ? renderSummaryPane(section, this.state) : "";
  }
}
