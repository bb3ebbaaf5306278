"""Model provider interface: one surface for all five model-backed capabilities.

Two backends ship here. The remote backend maps every capability onto
chat-completion HTTP calls with retries and strict output parsing. The mock
backend is a fully deterministic stand-in that makes the whole pipeline
runnable (and testable) offline: generation is rule-driven from the prompt
content, scores are token-overlap statistics.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import threading
import time
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import httpx

from .errors import ConfigError, ProviderError
from .segment import STOPWORDS, split_sentences, tokenize

logger = logging.getLogger(__name__)

CAPABILITIES = ("generate", "qa_extract", "answer_select", "duplicate_score", "entail")


@dataclass(frozen=True)
class SamplingParams:
    temperature: float = 1.0
    top_p: float = 0.9
    seed: int = 0
    max_tokens: int = 512

    def __post_init__(self):
        if not 0.0 < self.top_p <= 1.0:
            raise ValueError("top_p must be in (0, 1]")
        if self.temperature < 0.0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")


@runtime_checkable
class ModelProvider(Protocol):
    """The five capabilities the pipeline needs from any model backend."""

    identity: str

    def generate(self, prompt: str, params: SamplingParams) -> str: ...

    def qa_extract(self, question: str, passage: str) -> tuple[tuple[int, int], float] | None: ...

    def answer_select(self, question: str, passage: str) -> float: ...

    def duplicate_score(self, q1: str, q2: str) -> float: ...

    def entail(self, premise: str, hypothesis: str) -> float: ...


def _jaccard(a: str, b: str) -> float:
    ta, tb = set(tokenize(a)), set(tokenize(b))
    if not ta and not tb:
        return 1.0
    if not ta or not tb:
        return 0.0
    return len(ta & tb) / len(ta | tb)


def _normalize(text: str) -> str:
    return " ".join(text.lower().split())


class MockProvider:
    """Deterministic offline backend.

    generate() routes on the prompt's instruction line: headline prompts
    echo the first snippet title, question prompts emit templated
    questions seeded from the article tokens, summary prompts emit one
    cited sentence per numbered context. Scores are token-overlap rules.
    Same inputs + same seed always give the same outputs.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.identity = f"mock/seed={seed}"

    # -- generation ---------------------------------------------------------

    def generate(self, prompt: str, params: SamplingParams) -> str:
        if "Summarize the above" in prompt:
            return self._summary(prompt)
        if "strategic questions" in prompt:
            return self._questions(prompt, params)
        if "headline" in prompt.lower():
            return self._headline(prompt)
        digest = hashlib.sha256(f"{self.seed}:{params.seed}:{prompt}".encode()).hexdigest()
        return f"mock-output-{digest[:12]}"

    def _headline(self, prompt: str) -> str:
        for line in prompt.splitlines():
            if line.startswith("TITLE: "):
                return line[len("TITLE: ") :].strip()
        return "Untitled event"

    _QUESTION_TEMPLATES = (
        "What is the strategic significance of {}?",
        "What are the motivations behind {}?",
        "What are the potential implications of {}?",
        "How might {} affect the wider situation?",
    )

    def _questions(self, prompt: str, params: SamplingParams) -> str:
        counts: dict[str, int] = {}
        for t in tokenize(prompt):
            if t not in STOPWORDS and len(t) >= 5:
                counts[t] = counts.get(t, 0) + 1
        recurring = sorted(t for t, c in counts.items() if c >= 3)
        pool = recurring or sorted(counts) or ["events"]
        digest = hashlib.sha256(f"{self.seed}:{params.seed}".encode()).digest()
        lines = []
        for i, template in enumerate(self._QUESTION_TEMPLATES):
            token = pool[(digest[i] + i) % len(pool)]
            lines.append(template.format(token))
        return "\n".join(lines)

    def _summary(self, prompt: str) -> str:
        contexts = re.findall(r"^\[(\d+)\] (.+)$", prompt, flags=re.MULTILINE)
        if not contexts:
            return "No context available [1]."
        sentences = []
        for k, text in contexts:
            first = split_sentences(text)[0].rstrip(".!?")
            sentences.append(f"{first} [{k}].")
        if "2-3 sentences" in prompt:
            picked = sentences[:2]
        elif "2 paragraphs" in prompt:
            half = (len(sentences) + 1) // 2
            return " ".join(sentences[:half]) + "\n\n" + " ".join(sentences[half:] or sentences[:1])
        else:
            picked = sentences[:5]
        return " ".join(picked)

    # -- scoring ------------------------------------------------------------

    def qa_extract(self, question: str, passage: str) -> tuple[tuple[int, int], float] | None:
        q_tokens = {t for t in tokenize(question) if t not in STOPWORDS}
        if not q_tokens:
            return None
        pos = 0
        for sentence in split_sentences(passage):
            start = passage.find(sentence, pos)
            if start < 0:  # sentence text was whitespace-normalized; fall back to scan
                start = passage.find(sentence.split()[0], pos)
            s_tokens = {t for t in tokenize(sentence) if t not in STOPWORDS}
            overlap = q_tokens & s_tokens
            if overlap:
                end = min(start + len(sentence), len(passage))
                return (start, end), len(overlap) / len(q_tokens)
            pos = max(start + len(sentence), pos)
        return None

    def answer_select(self, question: str, passage: str) -> float:
        return _jaccard(question, passage)

    def duplicate_score(self, q1: str, q2: str) -> float:
        if _normalize(q1) == _normalize(q2):
            return 1.0
        return _jaccard(q1, q2)

    def entail(self, premise: str, hypothesis: str) -> float:
        return _jaccard(premise, hypothesis)


@dataclass(frozen=True)
class RemoteConfig:
    endpoint: str
    model: str
    api_key_env: str = "SITREP_API_KEY"
    timeout_s: float = 30.0
    max_retries: int = 3
    retry_backoff_s: float = 1.0
    max_in_flight: int = 4


class RemoteProvider:
    """Chat-completion HTTP backend with retry, timeout, and strict parsing.

    Score capabilities prompt for a bare number in [0, 1]; anything else
    (including out-of-range values) is a parse failure. The API key is
    read from the environment only.
    """

    _SCORE_RE = re.compile(r"^\s*([01](?:\.\d+)?|0?\.\d+)\s*$")

    def __init__(self, config: RemoteConfig, transport: httpx.BaseTransport | None = None):
        self.config = config
        self.identity = f"remote/{config.model}"
        self._semaphore = threading.BoundedSemaphore(config.max_in_flight)
        self._client = httpx.Client(timeout=config.timeout_s, transport=transport)

    def _api_key(self) -> str:
        key = os.environ.get(self.config.api_key_env, "")
        if not key:
            raise ConfigError(f"missing API key: set ${self.config.api_key_env}")
        return key

    def _chat(self, capability: str, prompt: str, params: SamplingParams) -> str:
        payload = {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": params.temperature,
            "top_p": params.top_p,
            "max_tokens": params.max_tokens,
            "seed": params.seed,
        }
        headers = {"Authorization": f"Bearer {self._api_key()}"}
        # Debug logging stays redacted: payload size only, never headers or body.
        logger.debug("%s -> POST %s (%d prompt chars)", capability, self.config.endpoint, len(prompt))
        delay = self.config.retry_backoff_s
        last: Exception | None = None
        for attempt in range(self.config.max_retries):
            try:
                with self._semaphore:
                    resp = self._client.post(self.config.endpoint, json=payload, headers=headers)
            except httpx.TimeoutException as exc:
                last = exc
                logger.warning("%s timeout (attempt %d)", capability, attempt + 1)
                time.sleep(delay)
                delay *= 2
                continue
            except httpx.HTTPError as exc:
                raise ProviderError(capability, "http_status", str(exc)) from exc
            if resp.status_code >= 500:
                last = ProviderError(capability, "http_status", f"HTTP {resp.status_code}")
                time.sleep(delay)
                delay *= 2
                continue
            if resp.status_code != 200:
                raise ProviderError(capability, "http_status", f"HTTP {resp.status_code}")
            try:
                content = resp.json()["choices"][0]["message"]["content"]
            except (KeyError, IndexError, ValueError) as exc:
                raise ProviderError(capability, "parse_failure", "unexpected response shape") from exc
            logger.debug("%s <- %d response chars", capability, len(content))
            return content
        if isinstance(last, httpx.TimeoutException):
            raise ProviderError(capability, "timeout", str(last))
        raise ProviderError(capability, "http_status", str(last))

    def _score(self, capability: str, prompt: str) -> float:
        text = self._chat(capability, prompt, SamplingParams(temperature=0.0, top_p=1.0))
        match = self._SCORE_RE.match(text)
        if not match:
            raise ProviderError(capability, "parse_failure", f"not a score: {text!r}")
        value = float(match.group(1))
        if not 0.0 <= value <= 1.0:
            raise ProviderError(capability, "parse_failure", f"score out of range: {value}")
        return value

    def generate(self, prompt: str, params: SamplingParams) -> str:
        return self._chat("generate", prompt, params)

    def qa_extract(self, question: str, passage: str) -> tuple[tuple[int, int], float] | None:
        prompt = (
            "Extract the shortest span of the passage that answers the question. "
            'Reply with JSON {"answer": "<exact span>", "confidence": <0..1>} '
            'or {"answer": null} if the passage does not answer it.\n\n'
            f"Question: {question}\nPassage: {passage}"
        )
        text = self._chat("qa_extract", prompt, SamplingParams(temperature=0.0, top_p=1.0))
        try:
            parsed = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ProviderError("qa_extract", "parse_failure", f"not JSON: {text!r}") from exc
        answer = parsed.get("answer")
        if answer is None:
            return None
        start = passage.find(str(answer))
        if start < 0:
            raise ProviderError("qa_extract", "parse_failure", "answer not found in passage")
        confidence = parsed.get("confidence", 0.5)
        if not isinstance(confidence, (int, float)) or not 0.0 <= confidence <= 1.0:
            raise ProviderError("qa_extract", "parse_failure", f"bad confidence: {confidence!r}")
        return (start, start + len(str(answer))), float(confidence)

    def answer_select(self, question: str, passage: str) -> float:
        return self._score(
            "answer_select",
            "Score from 0 to 1 how well the passage answers the question. "
            "Reply with the number only.\n\n"
            f"Question: {question}\nPassage: {passage}",
        )

    def duplicate_score(self, q1: str, q2: str) -> float:
        return self._score(
            "duplicate_score",
            "Score from 0 to 1 how likely these two questions are duplicates. "
            "Reply with the number only.\n\n"
            f"Q1: {q1}\nQ2: {q2}",
        )

    def entail(self, premise: str, hypothesis: str) -> float:
        return self._score(
            "entail",
            "Score from 0 to 1 whether the premise entails the hypothesis. "
            "Reply with the number only.\n\n"
            f"Premise: {premise}\nHypothesis: {hypothesis}",
        )


class CapabilityRouter:
    """Dispatch each capability to a (possibly different) backend."""

    def __init__(self, default: ModelProvider, overrides: dict[str, ModelProvider] | None = None):
        overrides = overrides or {}
        unknown = set(overrides) - set(CAPABILITIES)
        if unknown:
            raise ConfigError(f"unknown capability overrides: {sorted(unknown)}")
        self._default = default
        self._overrides = overrides
        parts = [default.identity] + [f"{c}={p.identity}" for c, p in sorted(overrides.items())]
        self.identity = "; ".join(parts)

    def _backend(self, capability: str) -> ModelProvider:
        return self._overrides.get(capability, self._default)

    def generate(self, prompt: str, params: SamplingParams) -> str:
        return self._backend("generate").generate(prompt, params)

    def qa_extract(self, question: str, passage: str):
        return self._backend("qa_extract").qa_extract(question, passage)

    def answer_select(self, question: str, passage: str) -> float:
        return self._backend("answer_select").answer_select(question, passage)

    def duplicate_score(self, q1: str, q2: str) -> float:
        return self._backend("duplicate_score").duplicate_score(q1, q2)

    def entail(self, premise: str, hypothesis: str) -> float:
        return self._backend("entail").entail(premise, hypothesis)


def mock_backend(seed: int = 0) -> MockProvider:
    return MockProvider(seed=seed)


def remote_backend(endpoint: str, model: str, api_key_env: str = "SITREP_API_KEY", **kwargs) -> RemoteProvider:
    return RemoteProvider(RemoteConfig(endpoint=endpoint, model=model, api_key_env=api_key_env, **kwargs))
