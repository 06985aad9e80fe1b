"""Left/right context extraction around dictionary matches.

For every match the two characters on each side form the context bigrams;
positions past an article edge are filled with the ``None`` sentinel.  A
side that is entirely sentinel (match touching the article boundary with
nothing beyond) is excluded from the frequency counts; half-sentinel
bigrams count as ordinary types.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .lexicon import Lexicon, longest_match_scan
from .ngram import (
    LEFT,
    RIGHT,
    Bigram,
    FreqTable,
    SmoothedTable,
    count_global_bigrams,
    smooth_table,
)

NONE_NONE: Bigram = (None, None)


@dataclass(frozen=True)
class ContextPair:
    left: Bigram
    right: Bigram


def context_of(seq, start: int, length: int) -> ContextPair:
    """Boundary-coded left and right bigrams of the span [start, start+length)."""
    n = len(seq)
    end = start + length
    if start < 0 or length < 0 or end > n:
        raise ValueError(f"span ({start}, {length}) out of range for length {n}")
    if start >= 2:
        left = (seq[start - 2], seq[start - 1])
    elif start == 1:
        left = (None, seq[0])
    else:
        left = NONE_NONE
    if end <= n - 2:
        right = (seq[end], seq[end + 1])
    elif end == n - 1:
        right = (seq[end], None)
    else:
        right = NONE_NONE
    return ContextPair(left, right)


def harvest(articles, lexicon: Lexicon, *, case_insensitive: bool = False,
            unigram_type_count: int | None = None) -> tuple[FreqTable, FreqTable]:
    """Count context bigrams of every dictionary match in every article.

    Returns (left table, right table).  Both carry the corpus-wide unigram
    type count so their unseen-type estimates share the global bigram
    universe; pass it in when already known, otherwise it is recomputed.
    """
    if unigram_type_count is None:
        chars: set[str] = set()
        for article in articles:
            chars.update(article.body)
        unigram_type_count = len(chars)
    left_counts: Counter = Counter()
    right_counts: Counter = Counter()
    for article in articles:
        for m in longest_match_scan(
            article.body, lexicon,
            case_insensitive=case_insensitive, article_id=article.id,
        ):
            pair = context_of(article.body, m.start, m.length)
            if pair.left != NONE_NONE:
                left_counts[pair.left] += 1
            if pair.right != NONE_NONE:
                right_counts[pair.right] += 1
    return (
        FreqTable(dict(left_counts), LEFT, unigram_type_count),
        FreqTable(dict(right_counts), RIGHT, unigram_type_count),
    )


@dataclass(frozen=True)
class ContextModels:
    """The three smoothed tables the likelihood-ratio scorer consumes."""

    background: SmoothedTable
    left: SmoothedTable
    right: SmoothedTable


def build_models(
    articles,
    lexicon: Lexicon,
    *,
    case_insensitive: bool = False,
    on_degenerate: str = "epsilon",
    epsilon: float = 1e-6,
) -> ContextModels:
    """Training step: global counts, context harvest, Good-Turing smoothing."""
    global_table = count_global_bigrams(articles)
    left_table, right_table = harvest(
        articles, lexicon,
        case_insensitive=case_insensitive,
        unigram_type_count=global_table.unigram_type_count,
    )
    return ContextModels(
        background=smooth_table(global_table, on_degenerate=on_degenerate, epsilon=epsilon),
        left=smooth_table(left_table, on_degenerate=on_degenerate, epsilon=epsilon),
        right=smooth_table(right_table, on_degenerate=on_degenerate, epsilon=epsilon),
    )
