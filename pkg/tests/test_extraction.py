from __future__ import annotations

from datetime import date

from sitrep.corpus import NewsArticle
from sitrep.errors import ProviderError
from sitrep.extraction import (
    AnswerCandidate,
    ClaimContext,
    expand_window,
    extract_answers,
    extract_contexts,
    split_snippets,
    validate_and_select,
)
from sitrep.providers import mock_backend
from sitrep.questions import StrategicQuestion
from sitrep.segment import split_sentences

def _article(body: str, article_id: str = "a1") -> NewsArticle:
    return NewsArticle(article_id, "src", "u", date(2022, 10, 1), "Title", body, "snippet")

def _question(text: str = "What happened with the drones?") -> StrategicQuestion:
    return StrategicQuestion(chapter_ref="c", text=text, set_index=0, qid="q0")

SEVEN = " ".join(f"Sentence number {w}." for w in ("one", "two", "three", "four", "five", "six", "seven"))

class TestSplitSnippets:
    def test_seven_sentences_size_three(self):
        snippets = split_snippets(_article(SEVEN), 3)
        assert [s.sentence_range for s in snippets] == [(0, 3), (3, 6), (6, 7)]

    def test_single_sentence(self):
        snippets = split_snippets(_article("Only one sentence here."), 5)
        assert len(snippets) == 1
        assert snippets[0].text == "Only one sentence here."

    def test_size_one_per_sentence(self):
        snippets = split_snippets(_article(SEVEN), 1)
        assert len(snippets) == 7

    def test_coverage_no_sentence_lost(self):
        article = _article(SEVEN)
        for size in (1, 2, 3, 5, 10):
            snippets = split_snippets(article, size)
            rebuilt = [s for sn in snippets for s in split_sentences(sn.text)]
            assert rebuilt == split_sentences(article.body)

    def test_abbreviations_not_split(self):
        body = "Gen. Smith spoke at the U.S. base. A second sentence follows."
        assert len(split_sentences(body)) == 2

class TestExtractAnswers:
    provider = mock_backend(0)

    def test_keyword_match_gives_span(self):
        article = _article("The drones hit the grid. Unrelated filler text here.")
        snippets = split_snippets(article, 5)
        result = extract_answers(_question(), snippets, self.provider)
        assert len(result) == 1
        (start, end) = result[0].answer_span
        assert snippets[0].text[start:end] == "The drones hit the grid."

    def test_no_overlap_no_answer(self):
        article = _article("Completely unrelated farming subsidies report.")
        result = extract_answers(_question(), split_snippets(article, 5), self.provider)
        assert result == []

    def test_two_of_three_snippets_answerable(self):
        body = (
            "The drones hit the grid. "  # answerable
            "Farm subsidies were renewed. "  # not
            "More drones were intercepted."  # answerable
        )
        snippets = split_snippets(_article(body), 1)
        assert len(snippets) == 3
        result = extract_answers(_question(), snippets, self.provider)
        assert len(result) == 2

    def test_failing_provider_skipped_not_fatal(self):
        class Flaky:
            identity = "test/flaky"

            def __init__(self):
                self.calls = 0

            def qa_extract(self, q, p):
                self.calls += 1
                if self.calls == 1:
                    raise ProviderError("qa_extract", "timeout")
                return (0, 5), 0.5

        snippets = split_snippets(_article(SEVEN), 3)
        result = extract_answers(_question(), snippets, Flaky())
        assert len(result) == 2  # first snippet failed, two succeeded

class TestExpandWindow:
    def test_middle_sentence_gets_three(self):
        article = _article(SEVEN)
        snippets = split_snippets(article, 10)
        sentences = split_sentences(article.body)
        # answer inside sentence index 3 ("four")
        offset = snippets[0].text.find("Sentence number four")
        candidate = AnswerCandidate(snippets[0], (offset, offset + 5), 1.0)
        window, rng = expand_window(candidate, article)
        assert rng == (2, 4)
        assert window == " ".join(sentences[2:5])

    def test_first_sentence_clipped(self):
        article = _article(SEVEN)
        snippets = split_snippets(article, 10)
        candidate = AnswerCandidate(snippets[0], (0, 8), 1.0)
        window, rng = expand_window(candidate, article)
        assert rng == (0, 1)

    def test_single_sentence_article(self):
        article = _article("Just the one sentence.")
        snippets = split_snippets(article, 5)
        candidate = AnswerCandidate(snippets[0], (0, 4), 1.0)
        window, rng = expand_window(candidate, article)
        assert window == "Just the one sentence."
        assert rng == (0, 0)

    def test_window_is_contiguous_run_containing_answer(self):
        article = _article(SEVEN)
        for size in (2, 3):
            for snippet in split_snippets(article, size):
                candidate = AnswerCandidate(snippet, (0, len(snippet.text)), 1.0)
                window, (lo, hi) = expand_window(candidate, article)
                sentences = split_sentences(article.body)
                assert window == " ".join(sentences[lo : hi + 1])
                assert lo <= snippet.sentence_range[0] <= hi

def _ctx(article_id: str, start: int, score: float = 0.0) -> ClaimContext:
    return ClaimContext(
        question_ref="q0",
        article_id=article_id,
        answer_span=(start, start + 1),
        window_text=f"window {article_id} {start}",
        window_range=(0, 0),
        validation_score=score,
        extraction_confidence=0.5,
    )

class _ScriptedJudge:
    identity = "test/scripted"

    def __init__(self, scores: dict[str, float]):
        self.scores = scores

    def answer_select(self, question: str, passage: str) -> float:
        return self.scores[passage]

class TestValidateAndSelect:
    def test_top_k_of_seven(self):
        candidates = [_ctx("a", i) for i in range(7)]
        scores = {c.window_text: i / 10 for i, c in enumerate(candidates)}
        kept = validate_and_select(_question(), candidates, _ScriptedJudge(scores), k=5)
        assert len(kept) == 5
        assert [c.validation_score for c in kept] == [0.6, 0.5, 0.4, 0.3, 0.2]

    def test_fewer_than_k_all_kept_in_order(self):
        candidates = [_ctx("a", 0), _ctx("a", 1)]
        kept = validate_and_select(
            _question(), candidates, _ScriptedJudge({candidates[0].window_text: 0.9, candidates[1].window_text: 0.1}), k=5
        )
        assert [c.validation_score for c in kept] == [0.9, 0.1]

    def test_empty_candidates_empty_result(self):
        assert validate_and_select(_question(), [], _ScriptedJudge({}), k=5) == []

    def test_tie_breaks_on_article_then_span(self):
        candidates = [_ctx("b", 5), _ctx("a", 9), _ctx("a", 2)]
        scores = {c.window_text: 0.7 for c in candidates}
        kept = validate_and_select(_question(), candidates, _ScriptedJudge(scores), k=3)
        assert [(c.article_id, c.answer_span[0]) for c in kept] == [("a", 2), ("a", 9), ("b", 5)]

    def test_selection_stability_below_kth_min(self):
        candidates = [_ctx("a", i) for i in range(5)]
        scores = {c.window_text: 0.5 + i / 100 for i, c in enumerate(candidates)}
        judge = _ScriptedJudge(scores)
        before = validate_and_select(_question(), candidates, judge, k=5)
        low = _ctx("z", 0)
        judge.scores[low.window_text] = 0.01
        after = validate_and_select(_question(), candidates + [low], judge, k=5)
        assert before == after

class TestExtractContexts:
    def test_end_to_end_with_mock(self):
        articles = [
            _article("The drones hit the grid overnight. Crews repaired the damage.", "a1"),
            _article("Grain exports resumed this week. Shipping lanes stayed open.", "a2"),
        ]
        contexts = extract_contexts(
            _question(), articles, mock_backend(0), mock_backend(0), bias={"a1": "center"}, k=5
        )
        assert contexts
        assert all(c.question_ref == "q0" for c in contexts)
        assert contexts[0].article_id == "a1"
        assert contexts[0].source_bias == "center"
        scores = [c.validation_score for c in contexts]
        assert scores == sorted(scores, reverse=True)
