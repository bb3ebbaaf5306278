"""Edit-distance study metrics, citation quality, and review aggregation.

All metrics here are pure functions. The edit metrics quantify how far a
generated summary is from its human-edited version; citation quality checks
whether bracket citations actually support their sentences under an
entailment judge; `aggregate_review` turns human labels into distributions.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import MalformedRecord


# ---------------------------------------------------------------------------
# Edit pairs


@dataclass(frozen=True)
class EditPair:
    generated: str
    edited: str
    question_ref: str | None = None

    def __post_init__(self):
        if not self.generated:
            raise ValueError("generated text must be non-empty")


@dataclass(frozen=True)
class EditMetrics:
    bleu: float
    rouge_l_f1: float
    levenshtein_char: int
    levenshtein_normalized: float
    tokens_inserted_pct: float
    tokens_deleted_pct: float
    unedited: bool

    def as_dict(self) -> dict:
        return {
            "bleu": self.bleu,
            "rouge_l_f1": self.rouge_l_f1,
            "levenshtein_char": self.levenshtein_char,
            "levenshtein_normalized": self.levenshtein_normalized,
            "tokens_inserted_pct": self.tokens_inserted_pct,
            "tokens_deleted_pct": self.tokens_deleted_pct,
            "unedited": self.unedited,
        }


# ---------------------------------------------------------------------------
# Core string metrics


def levenshtein(a: str, b: str) -> tuple[int, float]:
    """Unit-cost character edit distance plus max-length-normalized form."""
    if a == b:
        return 0, 0.0
    if not a:
        return len(b), 1.0
    if not b:
        return len(a), 1.0
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev = cur
    dist = prev[-1]
    return dist, dist / max(len(a), len(b))


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate: str, reference: str, max_n: int = 4) -> float:
    """Single-pair BLEU: clipped n-gram precisions, no smoothing.

    Short candidates cap the n-gram order at the candidate length instead
    of smoothing, so the metric stays defined on brief summaries.
    """
    cand = candidate.lower().split()
    ref = reference.lower().split()
    if not cand:
        return 0.0
    orders = range(1, min(max_n, len(cand)) + 1)
    log_sum = 0.0
    for n in orders:
        cand_ngrams = _ngrams(cand, n)
        ref_ngrams = _ngrams(ref, n)
        clipped = sum(min(c, ref_ngrams[g]) for g, c in cand_ngrams.items())
        total = sum(cand_ngrams.values())
        if clipped == 0:
            return 0.0
        log_sum += math.log(clipped / total)
    precision = math.exp(log_sum / len(list(orders)))
    brevity = math.exp(min(0.0, 1.0 - len(ref) / len(cand)))
    return precision * brevity


def _lcs_length(a: Sequence, b: Sequence) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0] * (len(b) + 1)
        for j, y in enumerate(b, start=1):
            cur[j] = prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1])
        prev = cur
    return prev[-1]


def rouge_l(candidate: str, reference: str) -> tuple[float, float, float]:
    """LCS-based precision, recall, F1 over lowercased whitespace tokens."""
    cand = candidate.lower().split()
    ref = reference.lower().split()
    lcs = _lcs_length(cand, ref)
    p = lcs / len(cand) if cand else 0.0
    r = lcs / len(ref) if ref else 0.0
    f1 = 2 * p * r / (p + r) if (p + r) > 0 else 0.0
    return p, r, f1


def token_churn(pair: EditPair) -> tuple[float, float]:
    """Fractions of tokens inserted/deleted, relative to the generated text.

    Alignment is the longest common subsequence over whitespace tokens
    (case-sensitive, so casing fixes count as edits).
    """
    gen = pair.generated.split()
    edited = pair.edited.split()
    if not gen:
        raise ValueError("generated text has no tokens")
    lcs = _lcs_length(gen, edited)
    inserted = len(edited) - lcs
    deleted = len(gen) - lcs
    return inserted / len(gen), deleted / len(gen)


def edit_metrics(pair: EditPair, max_n: int = 4) -> EditMetrics:
    dist, norm = levenshtein(pair.generated, pair.edited)
    _, _, rouge_f1 = rouge_l(pair.generated, pair.edited)
    inserted, deleted = token_churn(pair)
    return EditMetrics(
        bleu=bleu(pair.generated, pair.edited, max_n=max_n),
        rouge_l_f1=rouge_f1,
        levenshtein_char=dist,
        levenshtein_normalized=norm,
        tokens_inserted_pct=inserted,
        tokens_deleted_pct=deleted,
        unedited=(dist == 0),
    )


# ---------------------------------------------------------------------------
# Citation quality


@dataclass(frozen=True)
class CitationQuality:
    precision: float
    recall: float
    coverage: float
    multi_citation_rate: float

    def as_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "coverage": self.coverage,
            "multi_citation_rate": self.multi_citation_rate,
        }


def citation_quality(summary, contexts, judge, entail_threshold: float = 0.5) -> CitationQuality:
    """Entailment-based citation precision/recall plus coverage rates.

    A cited sentence is recalled iff the concatenation of its cited
    contexts entails it. A citation is precise iff its own context entails
    the sentence, or dropping it breaks entailment of the remaining set
    (a lone citation is therefore precise iff its context entails the
    sentence). Recall averages over cited sentences, precision over
    individual citations; coverage and the multi-citation rate are over
    all sentences.
    """
    sentences = summary.sentences
    n_total = len(sentences)
    if n_total == 0:
        return CitationQuality(0.0, 0.0, 0.0, 0.0)

    def window(idx: int) -> str:
        return contexts[idx - 1].window_text  # citations are 1-based

    def entails(premise: str, hypothesis: str) -> bool:
        if not premise:
            return False
        return judge.entail(premise, hypothesis) >= entail_threshold

    cited = [s for s in sentences if s.citations]
    recalled = 0
    precise = 0
    n_citations = 0
    for sent in cited:
        full = " ".join(window(k) for k in sent.citations)
        full_ok = entails(full, sent.text)
        if full_ok:
            recalled += 1
        for k in sent.citations:
            n_citations += 1
            if entails(window(k), sent.text):
                precise += 1
                continue
            rest = " ".join(window(j) for j in sent.citations if j != k)
            if full_ok and not entails(rest, sent.text):
                precise += 1

    recall = recalled / len(cited) if cited else 0.0
    precision = precise / n_citations if n_citations else 0.0
    coverage = len(cited) / n_total
    multi = sum(1 for s in sentences if len(s.citations) >= 2) / n_total
    return CitationQuality(precision, recall, coverage, multi)


# ---------------------------------------------------------------------------
# Human review labels


class ErrorCategory(enum.Enum):
    NO_RELEVANT_CONTEXTS = "no_relevant_contexts"
    INACCURATE = "inaccurate"
    INCOHERENT = "incoherent"
    INCOMPLETE = "incomplete"
    IRRELEVANT = "irrelevant"
    NONE = "none"


STRATEGIC_SCALE = ("not_strategic", "some_value", "definitely_strategic")
TACTICAL_SCALE = ("none_tactical", "some_tactical", "most_tactical")
READABILITY_DIMS = ("coherence", "relevance", "usefulness")


@dataclass(frozen=True)
class RubricLabel:
    strategic: str | None = None
    tactical: str | None = None
    readability: tuple[int, int, int] | None = None

    def __post_init__(self):
        if self.strategic is not None and self.strategic not in STRATEGIC_SCALE:
            raise ValueError(f"unknown strategic label: {self.strategic}")
        if self.tactical is not None and self.tactical not in TACTICAL_SCALE:
            raise ValueError(f"unknown tactical label: {self.tactical}")
        if self.readability is not None:
            if len(self.readability) != 3 or any(not 1 <= v <= 5 for v in self.readability):
                raise ValueError("readability scores must be three integers in 1..5")


def aggregate_review(labels: Sequence[ErrorCategory | RubricLabel]) -> dict:
    """Distribution report over error categories and rubric labels.

    Percentages are fractions in [0, 1] and sum to 1 within each labeled
    group. An empty label list yields an empty (all-zero) report.
    """
    errors = [l for l in labels if isinstance(l, ErrorCategory)]
    rubrics = [l for l in labels if isinstance(l, RubricLabel)]

    def distribution(values: list[str], scale: Sequence[str]) -> dict:
        counts = Counter(values)
        total = len(values)
        return {
            "counts": {s: counts.get(s, 0) for s in scale},
            "percent": {s: (counts.get(s, 0) / total if total else 0.0) for s in scale},
            "n": total,
        }

    error_values = [e.value for e in errors]
    strategic_values = [r.strategic for r in rubrics if r.strategic is not None]
    tactical_values = [r.tactical for r in rubrics if r.tactical is not None]
    readability = [r.readability for r in rubrics if r.readability is not None]

    means = {}
    for i, dim in enumerate(READABILITY_DIMS):
        means[dim] = (sum(t[i] for t in readability) / len(readability)) if readability else 0.0

    return {
        "n_labels": len(labels),
        "error_categories": distribution(error_values, [c.value for c in ErrorCategory]),
        "strategic": distribution(strategic_values, STRATEGIC_SCALE),
        "tactical": distribution(tactical_values, TACTICAL_SCALE),
        "readability": {"n": len(readability), "means": means},
    }


# ---------------------------------------------------------------------------
# File formats and report rendering


def load_edit_pairs(path: str | Path) -> list[EditPair]:
    """Read edit pairs from JSONL: {"generated", "edited", "question_id"?}."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                pairs.append(
                    EditPair(
                        generated=rec["generated"],
                        edited=rec["edited"],
                        question_ref=rec.get("question_id"),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise MalformedRecord(line_no, str(exc)) from exc
    return pairs


def load_labels_csv(path: str | Path) -> list[ErrorCategory | RubricLabel]:
    """Read review labels from CSV.

    Columns: kind,category,strategic,tactical,coherence,relevance,usefulness.
    kind=error rows use `category`; kind=rubric rows use the rest, with
    blank cells meaning "not labeled".
    """
    labels: list[ErrorCategory | RubricLabel] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for line_no, row in enumerate(reader, start=2):
            kind = (row.get("kind") or "").strip()
            try:
                if kind == "error":
                    labels.append(ErrorCategory((row.get("category") or "").strip()))
                elif kind == "rubric":
                    scores = [row.get(d) for d in READABILITY_DIMS]
                    readability = None
                    if any((s or "").strip() for s in scores):
                        readability = tuple(int((s or "").strip()) for s in scores)
                    labels.append(
                        RubricLabel(
                            strategic=(row.get("strategic") or "").strip() or None,
                            tactical=(row.get("tactical") or "").strip() or None,
                            readability=readability,
                        )
                    )
                else:
                    raise ValueError(f"unknown label kind: {kind!r}")
            except ValueError as exc:
                raise MalformedRecord(line_no, str(exc)) from exc
    return labels


def evaluate_pairs(pairs: Sequence[EditPair], max_n: int = 4) -> dict:
    """Per-pair edit metrics plus corpus-level aggregates.

    Normalized Levenshtein uses max(len) as the base; the raw distances
    are kept in the per-pair records so other bases can be recomputed.
    """
    per_pair = [edit_metrics(p, max_n=max_n) for p in pairs]
    n = len(per_pair)

    def mean(attr: str) -> float:
        return sum(getattr(m, attr) for m in per_pair) / n if n else 0.0

    return {
        "n_pairs": n,
        "aggregate": {
            "bleu": mean("bleu"),
            "rouge_l_f1": mean("rouge_l_f1"),
            "levenshtein_normalized": mean("levenshtein_normalized"),
            "tokens_inserted_pct": mean("tokens_inserted_pct"),
            "tokens_deleted_pct": mean("tokens_deleted_pct"),
            "unedited_fraction": (sum(1 for m in per_pair if m.unedited) / n) if n else 0.0,
        },
        "normalization": "levenshtein_normalized = distance / max(len(generated), len(edited))",
        "pairs": [
            {**m.as_dict(), "question_ref": p.question_ref}
            for p, m in zip(pairs, per_pair)
        ],
    }


def render_table(report: dict) -> str:
    """Plaintext rendering of an evaluation report."""
    lines = []
    agg = report.get("aggregate")
    if agg:
        lines.append(f"edit metrics over {report['n_pairs']} pairs")
        for key in (
            "bleu",
            "rouge_l_f1",
            "levenshtein_normalized",
            "tokens_inserted_pct",
            "tokens_deleted_pct",
            "unedited_fraction",
        ):
            lines.append(f"  {key:<24} {agg[key]:.4f}")
    review = report.get("review")
    if review:
        lines.append(f"review labels: {review['n_labels']}")
        for group in ("error_categories", "strategic", "tactical"):
            dist = review[group]
            if dist["n"]:
                lines.append(f"  {group} (n={dist['n']})")
                for name, pct in dist["percent"].items():
                    if dist["counts"][name]:
                        lines.append(f"    {name:<24} {pct:6.1%}")
        if review["readability"]["n"]:
            means = review["readability"]["means"]
            lines.append(f"  readability means (n={review['readability']['n']})")
            for dim in READABILITY_DIMS:
                lines.append(f"    {dim:<24} {means[dim]:.2f}")
    citations = report.get("citations")
    if citations:
        lines.append("citation quality")
        for key, value in citations.items():
            lines.append(f"  {key:<24} {value:.4f}")
    return "\n".join(lines)
