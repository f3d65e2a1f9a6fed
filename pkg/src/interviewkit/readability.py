"""Flesch-Kincaid readability metrics for interviewer questions.

Pure text statistics: sentences are maximal runs ending in ``.``, ``!``, or
``?``; words are whitespace tokens with surrounding punctuation stripped;
syllables use the vowel-group heuristic with a silent trailing ``e``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_SENTENCE_RE = re.compile(r"[.!?]+")
_WORD_STRIP_RE = re.compile(r"^[^A-Za-z0-9']+|[^A-Za-z0-9']+$")
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")

GRADE_WORDS_COEF = 0.39
GRADE_SYLLABLES_COEF = 11.8
GRADE_INTERCEPT = -15.59

EASE_INTERCEPT = 206.835
EASE_WORDS_COEF = 1.015
EASE_SYLLABLES_COEF = 84.6


@dataclass(frozen=True)
class ReadabilityStats:
    sentences: int
    words: int
    syllables: int
    grade: float
    ease: float


def count_sentences(text: str) -> int:
    count = len([s for s in _SENTENCE_RE.split(text) if s.strip()])
    return max(count, 1) if text.strip() else 0


def tokenize_words(text: str):
    words = []
    for token in text.split():
        word = _WORD_STRIP_RE.sub("", token)
        if word:
            words.append(word)
    return words


def count_syllables(word: str) -> int:
    word = word.lower().strip("'")
    if not word:
        return 0
    groups = _VOWEL_GROUP_RE.findall(word)
    count = len(groups)
    # Silent trailing e: "mate" has one spoken syllable, "me" still has one.
    if word.endswith("e") and not word.endswith(("le", "ee")) and count > 1:
        count -= 1
    return max(count, 1)


def analyze(text: str) -> ReadabilityStats:
    sentences = count_sentences(text)
    words = tokenize_words(text)
    if not words or sentences == 0:
        raise ValueError("text has no scoreable words")
    syllables = sum(count_syllables(w) for w in words)
    wps = len(words) / sentences
    spw = syllables / len(words)
    grade = GRADE_WORDS_COEF * wps + GRADE_SYLLABLES_COEF * spw + GRADE_INTERCEPT
    ease = EASE_INTERCEPT - EASE_WORDS_COEF * wps - EASE_SYLLABLES_COEF * spw
    return ReadabilityStats(
        sentences=sentences, words=len(words), syllables=syllables, grade=grade, ease=ease
    )


def grade_level(text: str) -> float:
    return analyze(text).grade


def reading_ease(text: str) -> float:
    return analyze(text).ease
