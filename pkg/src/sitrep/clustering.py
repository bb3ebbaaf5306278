"""Major-event discovery: TF-IDF vectors, agglomerative clustering, chapter naming.

The merge loop is written for exact reproducibility rather than speed:
pairwise distances are computed once with sorted-key iteration, linkage
sums always visit members in sorted-id order, and distance ties break on
the (min id, max id) of the would-be merged cluster. Shuffling the input
therefore never changes the resulting partition.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .corpus import NewsArticle, Timespan
from .errors import EmptyDocumentSet, ProviderError
from .providers import ModelProvider, SamplingParams
from .segment import content_tokens

logger = logging.getLogger(__name__)

MAX_HEADLINE_CHARS = 35


@dataclass(frozen=True)
class TfidfVector:
    terms: dict[str, float]
    norm: float

    @classmethod
    def from_weights(cls, weights: dict[str, float]) -> "TfidfVector":
        norm = math.sqrt(sum(w * w for _, w in sorted(weights.items())))
        return cls(terms=dict(weights), norm=norm)


@dataclass(frozen=True)
class EventCluster:
    member_ids: frozenset[str]
    centroid: TfidfVector


@dataclass(frozen=True)
class Chapter:
    timespan_index: int
    headline: str
    cluster: EventCluster
    expanded_article_ids: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.headline or len(self.headline) > MAX_HEADLINE_CHARS:
            raise ValueError(f"headline must be 1..{MAX_HEADLINE_CHARS} chars: {self.headline!r}")
        if not self.expanded_article_ids:
            object.__setattr__(self, "expanded_article_ids", self.cluster.member_ids)
        elif not self.cluster.member_ids <= self.expanded_article_ids:
            raise ValueError("expanded article set must contain all cluster members")


def tfidf_vectorize(docs: list[list[str]]) -> list[TfidfVector]:
    """TF-IDF with raw term frequency and idf = ln(N / df).

    A term occurring in every document gets weight 0; a single-document
    corpus therefore vectorizes to all-zero vectors.
    """
    if not docs:
        raise EmptyDocumentSet("no documents to vectorize")
    n_docs = len(docs)
    df: dict[str, int] = {}
    for tokens in docs:
        for term in set(tokens):
            df[term] = df.get(term, 0) + 1
    vectors = []
    for tokens in docs:
        tf: dict[str, int] = {}
        for t in tokens:
            tf[t] = tf.get(t, 0) + 1
        weights = {t: c * math.log(n_docs / df[t]) for t, c in sorted(tf.items())}
        vectors.append(TfidfVector.from_weights(weights))
    return vectors


def cosine_distance(u: TfidfVector, v: TfidfVector) -> float:
    """1 - cosine similarity; involving a zero vector always gives 1."""
    if u.norm == 0.0 or v.norm == 0.0:
        return 1.0
    smaller, larger = (u, v) if len(u.terms) <= len(v.terms) else (v, u)
    dot = 0.0
    for term, w in sorted(smaller.terms.items()):
        other = larger.terms.get(term)
        if other is not None:
            dot += w * other
    return 1.0 - dot / (u.norm * v.norm)


def _centroid(vectors: list[TfidfVector], ids: list[str], by_id: dict[str, TfidfVector]) -> TfidfVector:
    weights: dict[str, float] = {}
    for i in sorted(ids):
        for term, w in sorted(by_id[i].terms.items()):
            weights[term] = weights.get(term, 0.0) + w
    k = len(ids)
    return TfidfVector.from_weights({t: w / k for t, w in weights.items()})


def agglomerative_cluster(
    vectors: list[TfidfVector],
    distance_threshold: float,
    ids: list[str] | None = None,
) -> list[EventCluster]:
    """Bottom-up average-linkage clustering under cosine distance.

    Merging stops when the smallest inter-cluster distance exceeds
    `distance_threshold`; the cluster count falls out of the data. `ids`
    labels the vectors (defaults to zero-padded indices) and drives the
    deterministic tie-break.
    """
    if not vectors:
        raise EmptyDocumentSet("no vectors to cluster")
    if not 0.0 <= distance_threshold <= 2.0:
        raise ValueError("distance_threshold must be in [0, 2]")
    if ids is None:
        width = len(str(len(vectors) - 1))
        ids = [str(i).zfill(width) for i in range(len(vectors))]
    if len(ids) != len(vectors) or len(set(ids)) != len(ids):
        raise ValueError("ids must be unique and match the vector count")

    by_id = dict(zip(ids, vectors))
    pair_dist: dict[tuple[str, str], float] = {}
    ordered = sorted(ids)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            pair_dist[(a, b)] = cosine_distance(by_id[a], by_id[b])

    def linkage(members_a: list[str], members_b: list[str]) -> float:
        total = 0.0
        for a in members_a:
            for b in members_b:
                key = (a, b) if a < b else (b, a)
                total += pair_dist[key]
        return total / (len(members_a) * len(members_b))

    # Clusters keyed by sorted member tuple; always iterated in sorted order.
    clusters: list[list[str]] = [[i] for i in ordered]
    while len(clusters) > 1:
        best: tuple[float, str, str, int, int] | None = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                d = linkage(clusters[i], clusters[j])
                merged_min = min(clusters[i][0], clusters[j][0])
                merged_max = max(clusters[i][-1], clusters[j][-1])
                cand = (d, merged_min, merged_max, i, j)
                if best is None or cand[:3] < best[:3]:
                    best = cand
        assert best is not None
        d, _, _, i, j = best
        if d > distance_threshold:
            break
        merged = sorted(clusters[i] + clusters[j])
        clusters = [c for k, c in enumerate(clusters) if k not in (i, j)]
        clusters.append(merged)
        clusters.sort(key=lambda c: c[0])

    return [
        EventCluster(
            member_ids=frozenset(members),
            centroid=_centroid(vectors, members, by_id),
        )
        for members in sorted(clusters, key=lambda c: c[0])
    ]


def cluster_articles(
    articles: list[NewsArticle], distance_threshold: float
) -> list[EventCluster]:
    """Tokenize article title+body, vectorize, and cluster within one timespan."""
    docs = [content_tokens(a.title + " " + a.body) for a in articles]
    vectors = tfidf_vectorize(docs)
    return agglomerative_cluster(vectors, distance_threshold, ids=[a.id for a in articles])


def naming_input(cluster: EventCluster, articles: dict[str, NewsArticle]) -> str:
    """Concatenated title and text of every member snippet, id order."""
    blocks = []
    for member_id in sorted(cluster.member_ids):
        a = articles[member_id]
        blocks.append(f"TITLE: {a.title}\n{a.body}")
    return "\n\n".join(blocks)


def truncate_headline(text: str, limit: int = MAX_HEADLINE_CHARS) -> str:
    """Cut at the last word boundary within `limit` (hard cut if one word)."""
    text = text.strip()
    if len(text) <= limit:
        return text
    cut = text[:limit]
    if " " in cut:
        cut = cut[: cut.rfind(" ")]
    return cut.rstrip()


def name_chapter(
    cluster: EventCluster,
    articles: dict[str, NewsArticle],
    provider: ModelProvider,
    params: SamplingParams | None = None,
    prompt_template: str | None = None,
) -> str:
    """Ask the provider for a short event headline; enforce the 35-char cap."""
    if not cluster.member_ids:
        raise ValueError("cannot name an empty cluster")
    from .prompts import load_template  # local import to avoid cycle at module load

    template = prompt_template if prompt_template is not None else load_template("headline")
    prompt = template.format(snippets=naming_input(cluster, articles))
    raw = provider.generate(prompt, params or SamplingParams()).strip()
    if not raw:
        cluster_id = ",".join(sorted(cluster.member_ids))
        raise ProviderError("generate", "empty", f"no headline for cluster [{cluster_id}]")
    headline = " ".join(raw.split())
    if len(headline) > MAX_HEADLINE_CHARS:
        truncated = truncate_headline(headline)
        logger.info("headline truncated to %d chars: %r -> %r", len(truncated), headline, truncated)
        headline = truncated
    return headline


def format_retrieval_query(headline: str, span: Timespan, date_style: str = "paper_colon") -> str:
    """Build the corpus-expansion search query for a chapter and its timespan."""
    if not headline:
        raise ValueError("headline must be non-empty")
    if date_style == "paper_colon":
        fmt = "%Y:%m:%d"
    elif date_style == "dash":
        fmt = "%Y-%m-%d"
    else:
        raise ValueError(f"unknown date style: {date_style}")
    start = span.start_date.strftime(fmt)
    end = span.end_date.strftime(fmt)
    return f"{headline} after:{start} before:{end}"
