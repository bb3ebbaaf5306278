"""Deterministic rule-based text segmentation.

Sentence splitting and tokenization are intentionally simple so every stage
of the pipeline is reproducible byte-for-byte. The splitter favors stable
behavior over linguistic coverage; swap it out via `split_sentences` if a
smarter segmenter is ever needed.
"""

from __future__ import annotations

import re

# Tokens that end with "." but do not terminate a sentence.
_ABBREVIATIONS = {
    "mr.", "mrs.", "ms.", "dr.", "prof.", "gen.", "col.", "lt.", "sgt.",
    "maj.", "capt.", "st.", "mt.", "no.", "vs.", "etc.", "e.g.", "i.e.",
    "u.s.", "u.n.", "u.k.", "e.u.", "jan.", "feb.", "mar.", "apr.", "jun.",
    "jul.", "aug.", "sep.", "sept.", "oct.", "nov.", "dec.", "approx.",
}

_TERMINAL = ".!?"
_CLOSERS = "\"')]"

_TOKEN_RE = re.compile(r"[a-z0-9]+")

STOPWORDS = frozenset(
    """a an and are as at be been but by for from had has have he her his i if
    in into is it its of on or our she so that the their them they this to was
    we were what when where which who whose why will with would about after
    before over under between against during than then there these those due
    can could may might must should do does did not no nor also more most
    other some such only own same very just how all any both each few""".split()
)


def tokenize(text: str) -> list[str]:
    """Lowercase alphanumeric tokens, punctuation stripped."""
    return _TOKEN_RE.findall(text.lower())


def content_tokens(text: str) -> list[str]:
    """Tokens with the built-in English stopword list removed."""
    return [t for t in tokenize(text) if t not in STOPWORDS]


def _is_boundary(text: str, i: int) -> bool:
    """True if the terminal character at index i ends a sentence."""
    ch = text[i]
    if ch in "!?":
        return True
    # A period: reject abbreviations, initials, and decimals.
    j = i
    while j > 0 and not text[j - 1].isspace():
        j -= 1
    word = text[j : i + 1].lower()
    if word in _ABBREVIATIONS:
        return False
    if len(word) == 2 and word[0].isalpha():  # single-letter initial, "J."
        return False
    if i + 1 < len(text) and text[i + 1].isdigit():  # decimal like 3.5
        return False
    return True


def split_sentences(text: str) -> list[str]:
    """Split text into sentences on terminal punctuation + whitespace.

    Returns stripped sentence strings in order. Whitespace between
    sentences is not preserved; within a sentence, runs of whitespace
    (including newlines) are collapsed to single spaces.
    """
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _TERMINAL and _is_boundary(text, i):
            # Absorb runs of terminal punctuation and trailing closers.
            j = i + 1
            while j < n and (text[j] in _TERMINAL or text[j] in _CLOSERS):
                j += 1
            if j >= n or text[j].isspace():
                chunk = _normalize_ws(text[start:j])
                if chunk:
                    sentences.append(chunk)
                start = j
                i = j
                continue
        i += 1
    tail = _normalize_ws(text[start:])
    if tail:
        sentences.append(tail)
    return sentences


def _normalize_ws(chunk: str) -> str:
    return " ".join(chunk.split())
