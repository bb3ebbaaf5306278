"""Strategic question generation and de-duplication."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

from .clustering import Chapter
from .corpus import NewsArticle
from .errors import EmptyGeneration
from .prompts import load_template
from .providers import ModelProvider, SamplingParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StrategicQuestion:
    chapter_ref: str
    text: str
    set_index: int
    qid: str | None = None  # assigned at report assembly

    def __post_init__(self):
        if not self.text or not self.text.endswith("?"):
            raise ValueError(f"question must be non-empty and end with '?': {self.text!r}")

    def with_id(self, qid: str) -> "StrategicQuestion":
        return replace(self, qid=qid)


def build_question_prompt(
    chapter_name: str,
    articles: list[NewsArticle],
    template: str | None = None,
) -> str:
    template = template if template is not None else load_template("questions")
    blocks = [f"TITLE: {a.title}\n{a.body}" for a in articles]
    return template.format(chapter_name=chapter_name, articles="\n\n".join(blocks))


def parse_questions(raw: str, chapter_ref: str, set_index: int) -> tuple[list[StrategicQuestion], int]:
    """One question per non-empty line; lines not ending in '?' are dropped."""
    questions = []
    dropped = 0
    for line in raw.splitlines():
        text = line.strip()
        if not text:
            continue
        if text.endswith("?"):
            questions.append(StrategicQuestion(chapter_ref=chapter_ref, text=text, set_index=set_index))
        else:
            dropped += 1
    return questions, dropped


def generate_question_sets(
    chapter: Chapter,
    articles: dict[str, NewsArticle],
    n_sets: int,
    sampling: SamplingParams,
    provider: ModelProvider,
    chapter_ref: str | None = None,
    template: str | None = None,
) -> list[list[StrategicQuestion]]:
    """Sample `n_sets` question sets from the provider over the chapter's articles.

    Each call varies the sampling seed so nucleus-sampled sets differ. A
    set that parses to zero questions is logged and skipped.
    """
    if n_sets < 1:
        raise ValueError("n_sets must be >= 1")
    member_articles = [articles[i] for i in sorted(chapter.cluster.member_ids)]
    if not member_articles:
        raise ValueError("chapter has no articles")
    ref = chapter_ref if chapter_ref is not None else chapter.headline
    prompt = build_question_prompt(chapter.headline, member_articles, template=template)
    sets: list[list[StrategicQuestion]] = []
    total_dropped = 0
    for set_index in range(n_sets):
        params = replace(sampling, seed=sampling.seed + set_index)
        raw = provider.generate(prompt, params)
        questions, dropped = parse_questions(raw, ref, set_index)
        total_dropped += dropped
        if not questions:
            logger.warning("question set %d for chapter %r parsed to zero questions; skipped", set_index, ref)
            continue
        sets.append(questions)
    if total_dropped:
        logger.info("dropped %d non-question lines for chapter %r", total_dropped, ref)
    if not sets:
        raise EmptyGeneration(f"all {n_sets} question sets were empty for chapter {ref!r}")
    return sets


def deduplicate_questions(
    sets: list[list[StrategicQuestion]],
    judge: ModelProvider,
    threshold: float = 0.5,
) -> list[StrategicQuestion]:
    """Greedy first-kept-wins filter in (set_index, position) order.

    A question survives iff its duplicate score against every already-kept
    question stays below `threshold`.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must be in [0, 1]")
    if not any(sets):
        raise ValueError("need at least one non-empty question set")
    kept: list[StrategicQuestion] = []
    for question_set in sets:
        for question in question_set:
            if all(judge.duplicate_score(question.text, k.text) < threshold for k in kept):
                kept.append(question)
    return kept
