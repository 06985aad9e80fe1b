"""Candidate enumeration, likelihood-ratio scoring, and ranked pools.

Candidates are all substrings within a length range, swept head-position
first, together with their boundary-coded context bigrams (extraction
strings).  Each side contributes the ratio of its context-table
probability to its background probability; the score is the geometric
mean of the two ratios, computed in log space.  A fully-sentinel side is
neutral (ratio 1) because such contexts are excluded from training.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .contexts import NONE_NONE, ContextModels, context_of
from .lexicon import Lexicon
from .ngram import Bigram, SmoothedTable, bigram_text

PAREN_PAIRS = ("「」", "『』", "（）", "()")
_OPENERS = {pair[0]: i for i, pair in enumerate(PAREN_PAIRS)}
_CLOSERS = {pair[1]: i for i, pair in enumerate(PAREN_PAIRS)}


@dataclass(frozen=True)
class ExtractionString:
    """A candidate string plus its left/right context bigrams and provenance."""

    text: str
    left: Bigram
    right: Bigram
    article_id: str
    start: int


@dataclass(frozen=True)
class ScoredCandidate:
    text: str
    score: float
    left: Bigram
    right: Bigram
    article_id: str
    start: int
    iteration: int = 0


def enumerate_candidates(article, lmin: int, lmax: int):
    """Yield every admissible-length substring exactly once per (head, length).

    Heads sweep left to right; for each head, lengths grow by one character
    until the maximum length or the article end is reached.
    """
    if not 1 <= lmin <= lmax:
        raise ValueError(f"invalid length range [{lmin}, {lmax}]")
    body = article.body
    n = len(body)
    for head in range(0, n - lmin + 1):
        for length in range(lmin, min(lmax, n - head) + 1):
            pair = context_of(body, head, length)
            yield ExtractionString(
                text=body[head : head + length],
                left=pair.left,
                right=pair.right,
                article_id=article.id,
                start=head,
            )


def balanced_parens(text: str) -> bool:
    """True iff every 「」, 『』, （） and () is properly opened and closed.

    Each pair is tracked independently; a closer with no pending opener of
    its own kind, or a dangling opener, fails the check.
    """
    depth = [0, 0, 0, 0]
    for c in text:
        i = _OPENERS.get(c)
        if i is not None:
            depth[i] += 1
            continue
        i = _CLOSERS.get(c)
        if i is not None:
            depth[i] -= 1
            if depth[i] < 0:
                return False
    return not any(depth)


def _log_ratio(bigram: Bigram, table: SmoothedTable, background: SmoothedTable) -> float:
    if bigram == NONE_NONE:
        return 0.0
    return math.log(table.prob(bigram)) - math.log(background.prob(bigram))


def score(ext: ExtractionString, models: ContextModels) -> float:
    """Geometric mean of the left and right likelihood ratios."""
    log_s = 0.5 * (
        _log_ratio(ext.left, models.left, models.background)
        + _log_ratio(ext.right, models.right, models.background)
    )
    return math.exp(log_s)


class RankedPool:
    """Candidates unique by text, ranked by score descending.

    Per text the stored score is the maximum over all offered occurrences;
    a strictly higher score overwrites, equal scores keep the earliest
    occurrence.  Ties across texts break lexicographically.
    """

    def __init__(self, capacity: int | None = None, items=()):
        self.capacity = capacity
        self._by_text: dict[str, ScoredCandidate] = {}
        for item in items:
            self.offer(item)

    def offer(self, cand: ScoredCandidate) -> None:
        cur = self._by_text.get(cand.text)
        if cur is None or cand.score > cur.score:
            self._by_text[cand.text] = cand

    def merge(self, items) -> None:
        for item in items:
            self.offer(item)

    def ranked(self) -> list[ScoredCandidate]:
        items = sorted(self._by_text.values(), key=lambda c: (-c.score, c.text))
        if self.capacity is not None:
            items = items[: self.capacity]
        return items

    def top(self, n: int) -> list[ScoredCandidate]:
        return self.ranked()[:n]

    def texts(self) -> set[str]:
        return {c.text for c in self.ranked()}

    def get(self, text: str) -> ScoredCandidate | None:
        return self._by_text.get(text)

    def __contains__(self, text: str) -> bool:
        return text in self._by_text

    def __len__(self) -> int:
        return len(self.ranked())


def _log_prob_maps(table: SmoothedTable) -> tuple[dict, float]:
    log_mass = math.log(table.total_mass)
    return (
        {b: math.log(c) - log_mass for b, c in table.corrected.items()},
        math.log(table.gt_zero) - log_mass,
    )


def scan_and_rank(
    articles,
    lexicon: Lexicon,
    models: ContextModels,
    *,
    lmin: int = 2,
    lmax: int = 50,
    top_n: int = 2000,
    min_score: float | None = None,
    paren_filter: bool = True,
    iteration: int = 0,
) -> RankedPool:
    """Score all candidates and keep the top ``top_n``.

    Drops candidates already in the lexicon and (when ``paren_filter``)
    those with unmatched parentheses; deduplicates by text keeping the
    maximum score.  ``min_score`` additionally drops candidates at or below
    the threshold before ranking (scores do not exceed it by chance: a
    candidate with both context ratios equal to one scores exactly 1.0).

    Fused fast path over the article sweep; equivalent to scoring
    ``enumerate_candidates`` output, which the tests assert.
    """
    if not 1 <= lmin <= lmax:
        raise ValueError(f"invalid length range [{lmin}, {lmax}]")
    lp_left, lp_left_unseen = _log_prob_maps(models.left)
    lp_right, lp_right_unseen = _log_prob_maps(models.right)
    lp_bg, lp_bg_unseen = _log_prob_maps(models.background)

    def llr(bigram: Bigram, lp: dict, lp_unseen: float) -> float:
        if bigram == NONE_NONE:
            return 0.0
        return lp.get(bigram, lp_unseen) - lp_bg.get(bigram, lp_bg_unseen)

    min_log = None if min_score is None else math.log(min_score)
    best: dict[str, ScoredCandidate] = {}

    for article in articles:
        body = article.body
        n = len(body)
        for head in range(0, n - lmin + 1):
            if head >= 2:
                left = (body[head - 2], body[head - 1])
            elif head == 1:
                left = (None, body[0])
            else:
                left = NONE_NONE
            llr_l = llr(left, lp_left, lp_left_unseen)
            depth = [0, 0, 0, 0]
            nonzero = 0
            last = min(n, head + lmax)
            for end in range(head + 1, last + 1):
                if paren_filter:
                    c = body[end - 1]
                    i = _OPENERS.get(c)
                    if i is not None:
                        if depth[i] == 0:
                            nonzero += 1
                        depth[i] += 1
                    else:
                        i = _CLOSERS.get(c)
                        if i is not None:
                            depth[i] -= 1
                            if depth[i] < 0:
                                # A closer with no opener taints every longer
                                # candidate from this head.
                                break
                            if depth[i] == 0:
                                nonzero -= 1
                if end - head < lmin:
                    continue
                if paren_filter and nonzero:
                    continue
                if end <= n - 2:
                    right = (body[end], body[end + 1])
                elif end == n - 1:
                    right = (body[end], None)
                else:
                    right = NONE_NONE
                log_s = 0.5 * (llr_l + llr(right, lp_right, lp_right_unseen))
                if min_log is not None and log_s <= min_log:
                    continue
                text = body[head:end]
                if text in lexicon:
                    continue
                cand_score = math.exp(log_s)
                cur = best.get(text)
                if cur is None or cand_score > cur.score:
                    best[text] = ScoredCandidate(
                        text=text,
                        score=cand_score,
                        left=left,
                        right=right,
                        article_id=article.id,
                        start=head,
                        iteration=iteration,
                    )

    ranked = sorted(best.values(), key=lambda c: (-c.score, c.text))[:top_n]
    pool = RankedPool(capacity=top_n)
    pool.merge(ranked)
    return pool



def format_pool_tsv(items) -> str:
    """Ranked-pool TSV: rank, score, left, text, right, article id, offset."""
    lines = ["rank\tscore\tleft\ttext\tright\tarticle_id\toffset"]
    for rank, c in enumerate(items, start=1):
        lines.append(
            "%d\t%r\t%s\t%s\t%s\t%s\t%d"
            % (rank, c.score, bigram_text(c.left), c.text, bigram_text(c.right),
               c.article_id, c.start)
        )
    return "\n".join(lines) + "\n"


def _parse_bigram(rendered: str) -> Bigram:
    # Real characters are single scalars, so the rendered length alone
    # decides where the <NONE> sentinels sit (2, 7, or 12 characters).
    if rendered == "<NONE><NONE>":
        return NONE_NONE
    if len(rendered) == 7:
        if rendered.startswith("<NONE>"):
            return (None, rendered[6])
        if rendered.endswith("<NONE>"):
            return (rendered[0], None)
    if len(rendered) == 2:
        return (rendered[0], rendered[1])
    raise ValueError(f"unparseable bigram field {rendered!r}")


def parse_pool_tsv(lines) -> list[ScoredCandidate]:
    """Inverse of format_pool_tsv (header line required)."""
    rows = [line for line in lines if line.strip()]
    if not rows or not rows[0].startswith("rank\t"):
        raise ValueError("not a pool TSV: missing header")
    items = []
    for row in rows[1:]:
        _, score_s, left_s, text, right_s, article_id, offset_s = row.split("\t")
        items.append(
            ScoredCandidate(
                text=text,
                score=float(score_s),
                left=_parse_bigram(left_s),
                right=_parse_bigram(right_s),
                article_id=article_id,
                start=int(offset_s),
            )
        )
    return items
