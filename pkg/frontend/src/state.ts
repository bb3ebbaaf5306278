// View state and its transitions. Everything here is pure: transitions
// take a state and return a new one, validated against the loaded report
// so selections can never point at ids the report does not contain.

import type { ChapterNode, ContextNode, DetailLevel, Report, SectionNode, TimespanNode } from "./types.js";

export interface ReportIndex {
  report: Report;
  chapters: Map<string, ChapterNode>;
  sections: Map<string, SectionNode>;
  contexts: Map<string, ContextNode>;
  chapterOfSection: Map<string, string>;
  timespanOfChapter: Map<string, number>;
  sectionOfContext: Map<string, string>;
}

export interface ViewState {
  timespanIndex: number | null;
  chapterId: string | null;
  sectionId: string | null;
  detailLevel: DetailLevel;
  expandedClaims: ReadonlySet<string>;
  integrityWarning: string | null;
}

export function indexReport(report: Report): ReportIndex {
  const idx: ReportIndex = {
    report,
    chapters: new Map(),
    sections: new Map(),
    contexts: new Map(),
    chapterOfSection: new Map(),
    timespanOfChapter: new Map(),
    sectionOfContext: new Map(),
  };
  for (const span of report.timespans) {
    for (const chapter of span.chapters) {
      idx.chapters.set(chapter.id, chapter);
      idx.timespanOfChapter.set(chapter.id, span.index);
      for (const section of chapter.sections) {
        idx.sections.set(section.id, section);
        idx.chapterOfSection.set(section.id, chapter.id);
        for (const context of section.contexts) {
          idx.contexts.set(context.id, context);
          idx.sectionOfContext.set(context.id, section.id);
        }
      }
    }
  }
  return idx;
}

export function initialState(): ViewState {
  return {
    timespanIndex: null,
    chapterId: null,
    sectionId: null,
    detailLevel: "normal",
    expandedClaims: new Set(),
    integrityWarning: null,
  };
}

export function selectTimespan(state: ViewState, index: number, idx: ReportIndex): ViewState {
  const span = idx.report.timespans.find((s: TimespanNode) => s.index === index);
  if (!span) {
    throw new Error(`unknown timespan index: ${index}`);
  }
  return { ...state, timespanIndex: index, chapterId: null, sectionId: null, expandedClaims: new Set(), integrityWarning: null };
}

export function selectChapter(state: ViewState, chapterId: string, idx: ReportIndex): ViewState {
  if (!idx.chapters.has(chapterId)) {
    throw new Error(`unknown chapter id: ${chapterId}`);
  }
  return {
    ...state,
    timespanIndex: idx.timespanOfChapter.get(chapterId)!,
    chapterId,
    sectionId: null,
    expandedClaims: new Set(),
    integrityWarning: null,
  };
}

export function selectSection(state: ViewState, sectionId: string, idx: ReportIndex): ViewState {
  if (!idx.sections.has(sectionId)) {
    throw new Error(`unknown section id: ${sectionId}`);
  }
  const chapterId = idx.chapterOfSection.get(sectionId)!;
  // detailLevel deliberately carries over: the reader's depth choice
  // persists across section navigation.
  return {
    ...state,
    timespanIndex: idx.timespanOfChapter.get(chapterId)!,
    chapterId,
    sectionId,
    expandedClaims: new Set(),
    integrityWarning: null,
  };
}

export function toggleDetail(state: ViewState, level: DetailLevel): ViewState {
  if (state.detailLevel === level) {
    return state; // idempotent: re-selecting the active level changes nothing
  }
  return { ...state, detailLevel: level };
}

export function toggleClaim(state: ViewState, contextId: string, idx: ReportIndex): ViewState {
  if (!idx.contexts.has(contextId)) {
    // A citation that resolves nowhere should be impossible given the
    // report invariants; surface it loudly instead of crashing.
    return { ...state, integrityWarning: `citation points at missing context ${contextId}` };
  }
  const expanded = new Set(state.expandedClaims);
  if (expanded.has(contextId)) {
    expanded.delete(contextId);
  } else {
    expanded.add(contextId);
  }
  return { ...state, expandedClaims: expanded, integrityWarning: null };
}
