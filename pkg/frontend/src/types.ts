// Shapes of the report service's JSON (schema "sitrep/1").

export type DetailLevel = "less_detailed" | "normal" | "more_detailed";

export const DETAIL_LEVELS: DetailLevel[] = ["less_detailed", "normal", "more_detailed"];

export const DETAIL_LABELS: Record<DetailLevel, string> = {
  less_detailed: "Brief",
  normal: "Standard",
  more_detailed: "Extended",
};

export interface ArticleMeta {
  id: string;
  source: string;
  url: string;
  date: string;
  title: string;
  kind: string;
  bias: string;
}

export interface SummarySentence {
  text: string;
  citations: number[];
}

export interface SummaryNode {
  raw_text: string;
  dangling_citations: number;
  sentences: SummarySentence[];
}

export interface ContextNode {
  id: string;
  article_id: string;
  answer_span: [number, number];
  window_text: string;
  window_range: [number, number];
  validation_score: number;
  extraction_confidence: number;
  source_bias: string;
}

export interface SectionNode {
  id: string;
  question: { id: string; text: string; set_index: number };
  flags: string[];
  contexts: ContextNode[];
  summaries: Partial<Record<DetailLevel, SummaryNode>>;
}

export interface ChapterNode {
  id: string;
  headline: string;
  member_ids: string[];
  expanded_article_ids: string[];
  retrieval_query: string;
  sections: SectionNode[];
}

export interface TimespanNode {
  index: number;
  start_date: string;
  end_date: string;
  weeks: number;
  chapters: ChapterNode[];
}

export interface Report {
  schema: string;
  scenario: string;
  generated_at: string;
  provenance: Record<string, unknown>;
  articles: Record<string, ArticleMeta>;
  timespans: TimespanNode[];
}
