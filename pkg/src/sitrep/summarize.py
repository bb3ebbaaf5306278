"""Citation-grounded, query-focused summaries at three detail levels."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .errors import EmptyContexts, EmptyGeneration
from .extraction import ClaimContext
from .prompts import load_template
from .providers import ModelProvider, SamplingParams
from .questions import StrategicQuestion
from .segment import split_sentences

_MARKER_RE = re.compile(r"\[(\d+)\]")


class DetailLevel(enum.Enum):
    LESS_DETAILED = "less_detailed"
    NORMAL = "normal"
    MORE_DETAILED = "more_detailed"

    @property
    def directive(self) -> str:
        return _DIRECTIVES[self]


_DIRECTIVES = {
    DetailLevel.LESS_DETAILED: "2-3 sentences",
    DetailLevel.NORMAL: "4-6 sentences",
    DetailLevel.MORE_DETAILED: "2 paragraphs",
}


@dataclass(frozen=True)
class SummarySentence:
    text: str  # original sentence text, citation markers included
    citations: tuple[int, ...]  # valid 1-based context indices


@dataclass(frozen=True)
class GroundedSummary:
    question_ref: str
    level: DetailLevel
    sentences: tuple[SummarySentence, ...]
    raw_text: str
    dangling_citations: int = 0

    @property
    def citation_coverage(self) -> float:
        if not self.sentences:
            return 0.0
        return sum(1 for s in self.sentences if s.citations) / len(self.sentences)


def build_summary_prompt(
    question: StrategicQuestion,
    contexts: list[ClaimContext],
    level: DetailLevel,
    template: str | None = None,
) -> str:
    """Numbered context blocks, then the summarize-with-citations instruction."""
    if not contexts:
        raise EmptyContexts(f"no contexts for question {question.text!r}")
    template = template if template is not None else load_template("summary")
    blocks = [f"[{i}] {ctx.window_text}" for i, ctx in enumerate(contexts, start=1)]
    return template.format(
        contexts="\n".join(blocks),
        question=question.text,
        directive=level.directive,
    )


def generate_summary(prompt: str, provider: ModelProvider, params: SamplingParams | None = None) -> str:
    if not prompt:
        raise ValueError("prompt must be non-empty")
    raw = provider.generate(prompt, params or SamplingParams())
    if not raw.strip():
        raise EmptyGeneration("provider returned a blank summary")
    return raw


def parse_citations(
    raw_text: str, n_contexts: int, question_ref: str = "", level: DetailLevel = DetailLevel.NORMAL
) -> GroundedSummary:
    """Split the summary into sentences and resolve bracketed citation markers.

    Markers pointing past `n_contexts` are dropped from the citation list
    and counted as dangling; the sentence text itself is left untouched.
    """
    if n_contexts < 1:
        raise ValueError("n_contexts must be >= 1")
    sentences = []
    dangling = 0
    for text in split_sentences(raw_text):
        valid = []
        for marker in _MARKER_RE.findall(text):
            k = int(marker)
            if 1 <= k <= n_contexts:
                valid.append(k)
            else:
                dangling += 1
        sentences.append(SummarySentence(text=text, citations=tuple(valid)))
    return GroundedSummary(
        question_ref=question_ref,
        level=level,
        sentences=tuple(sentences),
        raw_text=raw_text,
        dangling_citations=dangling,
    )


def render_sentences(summary: GroundedSummary) -> str:
    """Re-render parsed sentences; equals raw_text modulo whitespace."""
    return " ".join(s.text for s in summary.sentences)


def summarize_section(
    question: StrategicQuestion,
    contexts: list[ClaimContext],
    provider: ModelProvider,
    params: SamplingParams | None = None,
    levels: tuple[DetailLevel, ...] = tuple(DetailLevel),
    template: str | None = None,
) -> dict[DetailLevel, GroundedSummary]:
    """Generate and parse one summary per requested detail level."""
    ref = question.qid or question.text
    summaries = {}
    for level in levels:
        prompt = build_summary_prompt(question, contexts, level, template=template)
        raw = generate_summary(prompt, provider, params)
        summaries[level] = parse_citations(raw, len(contexts), question_ref=ref, level=level)
    return summaries
