from __future__ import annotations

import math
import random
from datetime import date

import pytest

from sitrep.clustering import (
    EventCluster,
    TfidfVector,
    agglomerative_cluster,
    cosine_distance,
    format_retrieval_query,
    name_chapter,
    tfidf_vectorize,
    truncate_headline,
)
from sitrep.corpus import NewsArticle, Timespan
from sitrep.errors import EmptyDocumentSet, ProviderError
from sitrep.providers import SamplingParams


def _vec(**weights: float) -> TfidfVector:
    return TfidfVector.from_weights(dict(weights))


def _partition(clusters: list[EventCluster]) -> set[frozenset[str]]:
    return {c.member_ids for c in clusters}


class TestTfidf:
    def test_term_in_every_doc_weighs_zero(self):
        vectors = tfidf_vectorize([["a", "b"], ["a", "c"]])
        assert vectors[0].terms["a"] == 0.0
        assert vectors[1].terms["a"] == 0.0

    def test_single_doc_all_zero(self):
        vectors = tfidf_vectorize([["x", "y", "x"]])
        assert all(w == 0.0 for w in vectors[0].terms.values())
        assert vectors[0].norm == 0.0

    def test_repeated_term_weight(self):
        vectors = tfidf_vectorize([["x", "x"], ["y"]])
        assert vectors[0].terms["x"] == pytest.approx(2 * math.log(2), abs=1e-12)

    def test_norm_is_euclidean(self):
        vectors = tfidf_vectorize([["x", "y"], ["z"]])
        expected = math.sqrt(sum(w * w for w in vectors[0].terms.values()))
        assert vectors[0].norm == pytest.approx(expected)

    def test_empty_docs_rejected(self):
        with pytest.raises(EmptyDocumentSet):
            tfidf_vectorize([])


class TestCosineDistance:
    def test_identical_vectors(self):
        v = _vec(a=1.0, b=2.0)
        assert cosine_distance(v, v) == pytest.approx(0.0)

    def test_orthogonal(self):
        assert cosine_distance(_vec(a=1.0), _vec(b=1.0)) == pytest.approx(1.0)

    def test_opposite(self):
        assert cosine_distance(_vec(a=1.0), _vec(a=-1.0)) == pytest.approx(2.0)

    def test_zero_vector_distance_one(self):
        zero = TfidfVector.from_weights({})
        assert cosine_distance(zero, _vec(a=1.0)) == 1.0
        assert cosine_distance(zero, zero) == 1.0


class TestAgglomerative:
    def test_identical_vectors_one_cluster(self):
        clusters = agglomerative_cluster([_vec(a=1.0), _vec(a=1.0)], 0.1)
        assert len(clusters) == 1
        assert clusters[0].member_ids == frozenset({"0", "1"})

    def test_orthogonal_stay_apart(self):
        clusters = agglomerative_cluster([_vec(a=1.0), _vec(b=1.0)], 0.5)
        assert len(clusters) == 2

    def test_hand_cosine_thresholding(self):
        # (1,0) vs (1,0.1): distance 1 - 1/sqrt(1.01) ~ 0.005; both vs (0,1): ~1
        vectors = [_vec(x=1.0), _vec(x=1.0, y=0.1), _vec(y=1.0)]
        clusters = agglomerative_cluster(vectors, 0.3, ids=["p", "q", "r"])
        assert _partition(clusters) == {frozenset({"p", "q"}), frozenset({"r"})}

    def test_threshold_zero_all_singletons(self):
        vectors = [_vec(a=1.0), _vec(b=1.0), _vec(a=1.0, b=1.0)]
        clusters = agglomerative_cluster(vectors, 0.0)
        assert len(clusters) == 3

    def test_threshold_two_single_cluster(self):
        vectors = [_vec(a=1.0), _vec(b=1.0), _vec(c=1.0)]
        clusters = agglomerative_cluster(vectors, 2.0)
        assert len(clusters) == 1

    def test_permutation_invariance(self):
        rng = random.Random(99)
        base = [
            {"w": 1.0, "x": 0.2},
            {"w": 0.9, "x": 0.3},
            {"y": 1.0, "z": 0.1},
            {"y": 0.8, "z": 0.4},
            {"q": 1.0},
        ]
        ids = [f"d{i}" for i in range(len(base))]
        reference = None
        for _ in range(10):
            order = list(range(len(base)))
            rng.shuffle(order)
            vectors = [TfidfVector.from_weights(base[i]) for i in order]
            clusters = agglomerative_cluster(vectors, 0.6, ids=[ids[i] for i in order])
            partition = _partition(clusters)
            if reference is None:
                reference = partition
            assert partition == reference

    def test_threshold_monotonicity(self):
        rng = random.Random(7)
        vectors = [
            TfidfVector.from_weights({f"t{j}": rng.random() for j in range(4)}) for _ in range(8)
        ]
        counts = []
        for threshold in (0.0, 0.25, 0.5, 0.75, 1.0):
            counts.append(len(agglomerative_cluster(vectors, threshold)))
        assert counts == sorted(counts, reverse=True)

    def test_partition_covers_input(self):
        vectors = [_vec(a=1.0), _vec(b=1.0), _vec(a=1.0, b=0.5)]
        clusters = agglomerative_cluster(vectors, 0.9, ids=["x", "y", "z"])
        members = [m for c in clusters for m in c.member_ids]
        assert sorted(members) == ["x", "y", "z"]


class _EchoProvider:
    identity = "test/echo"

    def __init__(self, reply: str):
        self.reply = reply
        self.prompts: list[str] = []

    def generate(self, prompt: str, params: SamplingParams) -> str:
        self.prompts.append(prompt)
        return self.reply


def _article(article_id: str, title: str, body: str = "Body text.") -> NewsArticle:
    return NewsArticle(article_id, "src", "u", date(2022, 10, 1), title, body, "snippet")


def _cluster(*ids: str) -> EventCluster:
    return EventCluster(member_ids=frozenset(ids), centroid=TfidfVector.from_weights({}))


class TestNameChapter:
    def test_passthrough(self):
        articles = {"a1": _article("a1", "Lyman retreat")}
        provider = _EchoProvider("Lyman retreat")
        assert name_chapter(_cluster("a1"), articles, provider) == "Lyman retreat"
        # prompt contains the concatenated title and text
        assert "Lyman retreat" in provider.prompts[0]
        assert "Body text." in provider.prompts[0]

    def test_long_output_truncated_at_word_boundary(self):
        articles = {"a1": _article("a1", "t")}
        long_reply = "This headline is definitely much longer than the thirty five character cap"
        headline = name_chapter(_cluster("a1"), articles, _EchoProvider(long_reply))
        assert len(headline) <= 35
        assert not headline.endswith(" ")
        assert long_reply.startswith(headline)
        assert long_reply[len(headline)] == " "  # cut exactly at a boundary

    def test_empty_output_raises(self):
        articles = {"a1": _article("a1", "t")}
        with pytest.raises(ProviderError):
            name_chapter(_cluster("a1"), articles, _EchoProvider("   "))

    def test_truncate_single_long_word(self):
        assert truncate_headline("x" * 50) == "x" * 35


class TestRetrievalQuery:
    span = Timespan(index=0, start_date=date(2022, 10, 1), end_date=date(2022, 10, 15), weeks=2)

    def test_paper_colon_style(self):
        query = format_retrieval_query("Retreat of Russian Troops from Lyman", self.span, "paper_colon")
        assert query == "Retreat of Russian Troops from Lyman after:2022:10:01 before:2022:10:15"

    def test_dash_style(self):
        query = format_retrieval_query("Retreat of Russian Troops from Lyman", self.span, "dash")
        assert query == "Retreat of Russian Troops from Lyman after:2022-10-01 before:2022-10-15"

    def test_empty_headline_rejected(self):
        with pytest.raises(ValueError):
            format_retrieval_query("", self.span)
