"""Question-driven claim extraction.

Articles are chunked into snippets, a QA capability pulls candidate answer
spans per snippet, each answer grows into a 3-sentence window (answer
sentence plus one neighbor on each side), and an answer-selection judge
scores windows against the question so only the top-k survive.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .corpus import NewsArticle
from .errors import ProviderError
from .providers import ModelProvider
from .questions import StrategicQuestion
from .segment import split_sentences

logger = logging.getLogger(__name__)

DEFAULT_TOP_K = 5


@dataclass(frozen=True)
class ArticleSnippet:
    article_id: str
    sentence_range: tuple[int, int]  # [start, end) into the article's sentences
    text: str


@dataclass(frozen=True)
class AnswerCandidate:
    snippet: ArticleSnippet
    answer_span: tuple[int, int]  # character range within snippet.text
    extraction_confidence: float


@dataclass(frozen=True)
class ClaimContext:
    question_ref: str
    article_id: str
    answer_span: tuple[int, int]
    window_text: str
    window_range: tuple[int, int]  # sentence indices [start, end] inclusive
    validation_score: float
    extraction_confidence: float
    source_bias: str = "unknown"

    def __post_init__(self):
        if not 0.0 <= self.validation_score <= 1.0:
            raise ValueError("validation_score must be in [0, 1]")


def split_snippets(article: NewsArticle, sentences_per_snippet: int = 5) -> list[ArticleSnippet]:
    """Chunk the article into consecutive snippets of at most N sentences."""
    if sentences_per_snippet < 1:
        raise ValueError("sentences_per_snippet must be >= 1")
    sentences = split_sentences(article.body)
    snippets = []
    for start in range(0, len(sentences), sentences_per_snippet):
        chunk = sentences[start : start + sentences_per_snippet]
        snippets.append(
            ArticleSnippet(
                article_id=article.id,
                sentence_range=(start, start + len(chunk)),
                text=" ".join(chunk),
            )
        )
    return snippets


def extract_answers(
    question: StrategicQuestion,
    snippets: list[ArticleSnippet],
    provider: ModelProvider,
) -> list[AnswerCandidate]:
    """Run the QA capability per snippet; unanswerable snippets yield nothing.

    Per-snippet provider failures are logged and skipped so one bad call
    cannot sink the question.
    """
    if not snippets:
        raise ValueError("no snippets to extract from")
    candidates = []
    for snippet in snippets:
        try:
            result = provider.qa_extract(question.text, snippet.text)
        except ProviderError as exc:
            logger.warning("qa_extract failed on %s[%s]: %s", snippet.article_id, snippet.sentence_range, exc)
            continue
        if result is None:
            continue
        (start, end), confidence = result
        if not (0 <= start < end <= len(snippet.text)):
            logger.warning("answer span %r outside snippet %s; skipped", (start, end), snippet.article_id)
            continue
        candidates.append(AnswerCandidate(snippet=snippet, answer_span=(start, end), extraction_confidence=confidence))
    return candidates


def _sentence_index_of_span(snippet: ArticleSnippet, span: tuple[int, int]) -> int:
    """Which article sentence contains the span's start offset."""
    sentences = split_sentences(snippet.text)
    offset = 0
    for local_idx, sentence in enumerate(sentences):
        start = snippet.text.index(sentence, offset)
        end = start + len(sentence)
        if span[0] < end:
            return snippet.sentence_range[0] + local_idx
        offset = end
    return snippet.sentence_range[1] - 1


def expand_window(
    candidate: AnswerCandidate, article: NewsArticle
) -> tuple[str, tuple[int, int]]:
    """The answer's sentence plus one sentence each side, clipped at bounds.

    Returns (window text, inclusive sentence index range).
    """
    if candidate.snippet.article_id != article.id:
        raise ValueError("candidate does not belong to this article")
    sentences = split_sentences(article.body)
    center = _sentence_index_of_span(candidate.snippet, candidate.answer_span)
    lo = max(0, center - 1)
    hi = min(len(sentences) - 1, center + 1)
    return " ".join(sentences[lo : hi + 1]), (lo, hi)


def validate_and_select(
    question: StrategicQuestion,
    candidates: list[ClaimContext],
    judge: ModelProvider,
    k: int = DEFAULT_TOP_K,
) -> list[ClaimContext]:
    """Score each context against the question and keep the top-k.

    Ties in validation score break on (article_id, span start) so the
    selection is stable. An empty candidate list is not an error; the
    section downstream is flagged as having no relevant contexts.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    scored = []
    for ctx in candidates:
        score = judge.answer_select(question.text, ctx.window_text)
        if not 0.0 <= score <= 1.0:
            raise ProviderError("answer_select", "parse_failure", f"score out of range: {score}")
        scored.append(
            ClaimContext(
                question_ref=ctx.question_ref,
                article_id=ctx.article_id,
                answer_span=ctx.answer_span,
                window_text=ctx.window_text,
                window_range=ctx.window_range,
                validation_score=score,
                extraction_confidence=ctx.extraction_confidence,
                source_bias=ctx.source_bias,
            )
        )
    scored.sort(key=lambda c: (-c.validation_score, c.article_id, c.answer_span[0]))
    return scored[:k]


def extract_contexts(
    question: StrategicQuestion,
    articles: list[NewsArticle],
    provider: ModelProvider,
    judge: ModelProvider,
    bias: dict[str, str] | None = None,
    sentences_per_snippet: int = 5,
    k: int = DEFAULT_TOP_K,
    question_ref: str | None = None,
) -> list[ClaimContext]:
    """Full extraction pass for one question over a chapter's articles."""
    bias = bias or {}
    ref = question_ref if question_ref is not None else (question.qid or question.text)
    candidates: list[ClaimContext] = []
    for article in articles:
        snippets = split_snippets(article, sentences_per_snippet)
        for cand in extract_answers(question, snippets, provider):
            window_text, window_range = expand_window(cand, article)
            candidates.append(
                ClaimContext(
                    question_ref=ref,
                    article_id=article.id,
                    answer_span=cand.answer_span,
                    window_text=window_text,
                    window_range=window_range,
                    validation_score=0.0,  # replaced during validation
                    extraction_confidence=cand.extraction_confidence,
                    source_bias=bias.get(article.id, "unknown"),
                )
            )
    return validate_and_select(question, candidates, judge, k=k)
