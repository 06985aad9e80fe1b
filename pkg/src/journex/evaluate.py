"""Cumulative precision / recall / F-measure and answer-list construction.

Precision is judged-correct candidates over candidates extracted so far;
recall is pool texts matching the correct-answer data over the answer-data
size.  The answer data itself is built from an external journal list by
keeping names that occur in the corpus (case-insensitive longest-match
retrieval), dropping general-noun stoplist hits, then dropping short
names.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lexicon import Lexicon, fold_text, longest_match_scan

DEFAULT_ANSWER_MIN_LEN = 10  # drop names of nine characters or less


@dataclass(frozen=True)
class AnswerSet:
    names: frozenset[str]
    case_insensitive: bool = True

    def __post_init__(self):
        if self.case_insensitive:
            object.__setattr__(self, "_folded", frozenset(fold_text(n) for n in self.names))

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, text: str) -> bool:
        if self.case_insensitive:
            return fold_text(text) in self._folded
        return text in self.names


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f_measure: float
    judged_correct: int
    extracted_so_far: int
    matching: int
    answer_size: int


def f_measure(precision: float, recall: float) -> float:
    if precision + recall <= 0:
        return 0.0
    return 2.0 * recall * precision / (recall + precision)


def compute_metrics(
    judged_correct: int,
    extracted_so_far: int,
    matching: int,
    answer_size: int,
) -> Metrics:
    """P, R, F from the four raw counts; zero denominators give 0."""
    if not 0 <= judged_correct <= extracted_so_far:
        raise ValueError("need extracted_so_far >= judged_correct >= 0")
    if not 0 <= matching <= answer_size:
        raise ValueError("need answer_size >= matching >= 0")
    precision = judged_correct / extracted_so_far if extracted_so_far else 0.0
    recall = matching / answer_size if answer_size else 0.0
    return Metrics(
        precision=precision,
        recall=recall,
        f_measure=f_measure(precision, recall),
        judged_correct=judged_correct,
        extracted_so_far=extracted_so_far,
        matching=matching,
        answer_size=answer_size,
    )


def build_answer_list(
    journal_list,
    corpus,
    noun_stoplist=(),
    min_len: int = DEFAULT_ANSWER_MIN_LEN,
) -> AnswerSet:
    """Filter an external journal list down to usable correct-answer data.

    Keeps names actually retrievable from the corpus, then applies the
    stoplist and the minimum character length (Unicode scalar values).
    """
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    names = {n for n in journal_list if n}
    if names:
        lex = Lexicon(names)
        found: set[str] = set()
        for article in corpus:
            for m in longest_match_scan(article.body, lex, case_insensitive=True,
                                        article_id=article.id):
                found.add(m.entry)
            if len(found) == len(names):
                break
        names = found
    stop = set(noun_stoplist)
    names = {n for n in names if n not in stop}
    names = {n for n in names if len(n) >= min_len}
    return AnswerSet(frozenset(names))


def match_pool(pool_texts, answers: AnswerSet) -> int:
    """Number of distinct pool texts that are in the answer data."""
    return sum(1 for t in set(pool_texts) if t in answers)
