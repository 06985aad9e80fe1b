"""Bootstrap loop: alternate context training / candidate extraction with
a judge in the loop, growing the dictionary every round.

Each iteration rebuilds the smoothed tables from the current dictionary,
scans for the top new candidates, merges them into the cumulative pool
(higher score overwrites), applies the judge to still-pending pool items,
and folds accepted names into the dictionary.  State checkpoints are
plain versioned JSON so a run can pause for days between iterations while
a human judges.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field, replace

from .contexts import build_models
from .evaluate import AnswerSet, compute_metrics, match_pool
from .lexicon import Lexicon
from .scan import RankedPool, ScoredCandidate, format_pool_tsv, scan_and_rank

logger = logging.getLogger(__name__)

ACCEPT = "ACCEPT"
REJECT = "REJECT"
PENDING = "PENDING"

CHECKPOINT_FORMAT = "journex-bootstrap-state"
CHECKPOINT_VERSION = 1


class JudgeUnavailable(RuntimeError):
    """The judge cannot answer right now; items stay pending."""


class CheckpointError(ValueError):
    """Missing, corrupt, or wrong-format checkpoint file."""


@dataclass(frozen=True)
class BootstrapConfig:
    iterations: int = 2
    lmin: int = 2
    lmax: int = 50
    top_n: int = 2000
    # Candidates whose geometric-mean likelihood ratio does not exceed 1 are
    # uninformative (a neutral candidate scores exactly 1), so they are not
    # extracted; set to None to rank purely by top_n.
    min_score: float | None = 1.0
    paren_filter_all_iterations: bool = True
    harvest_case_insensitive: bool = False
    recall_judged_only: bool = False
    smoothing_epsilon: float = 1e-6

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "lmin": self.lmin,
            "lmax": self.lmax,
            "top_n": self.top_n,
            "min_score": self.min_score,
            "paren_filter_all_iterations": self.paren_filter_all_iterations,
            "harvest_case_insensitive": self.harvest_case_insensitive,
            "recall_judged_only": self.recall_judged_only,
            "smoothing_epsilon": self.smoothing_epsilon,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BootstrapConfig":
        return cls(**{k: d[k] for k in cls().to_dict() if k in d})


@dataclass
class BootstrapState:
    lexicon: Lexicon
    seeds: frozenset[str]
    iteration: int = 0
    pool: RankedPool = field(default_factory=RankedPool)
    judgments: dict[str, str] = field(default_factory=dict)
    history: list[dict] = field(default_factory=list)
    halted: bool = False

    def verdict(self, text: str) -> str:
        return self.judgments.get(text, PENDING)

    def pending_texts(self) -> list[str]:
        return [c.text for c in self.pool.ranked() if c.text not in self.judgments]

    def counts(self) -> dict[str, int]:
        ranked = self.pool.ranked()
        accepted = sum(1 for c in ranked if self.judgments.get(c.text) == ACCEPT)
        rejected = sum(1 for c in ranked if self.judgments.get(c.text) == REJECT)
        return {
            "pool_size": len(ranked),
            "accepted": accepted,
            "rejected": rejected,
            "pending": len(ranked) - accepted - rejected,
            "lexicon_size": len(self.lexicon),
        }


def headless_judge(answers, *, case_insensitive: bool = False):
    """Oracle judge: ACCEPT iff the candidate text is in the answer set."""
    if isinstance(answers, AnswerSet):
        member = answers
    else:
        member = AnswerSet(frozenset(answers), case_insensitive=case_insensitive)

    def judge(cand: ScoredCandidate) -> str:
        return ACCEPT if cand.text in member else REJECT

    return judge


def recorded_judge(judgments: dict[str, str]):
    """Judge that replays verdicts recorded out-of-band (review service)."""

    def judge(cand: ScoredCandidate) -> str:
        return judgments.get(cand.text, PENDING)

    return judge


def _snapshot_metrics(state: BootstrapState, answers: AnswerSet | None,
                      config: BootstrapConfig, new_candidates: int) -> dict:
    ranked = state.pool.ranked()
    texts = [c.text for c in ranked]
    accepted = [t for t in texts if state.judgments.get(t) == ACCEPT]
    if answers is not None:
        match_base = accepted if config.recall_judged_only else texts
        matching = match_pool(match_base, answers)
        answer_size = len(answers)
    else:
        matching = 0
        answer_size = 0
    m = compute_metrics(len(accepted), len(texts), matching, answer_size)
    row = {
        "iteration": state.iteration,
        "precision": m.precision,
        "recall": m.recall,
        "f_measure": m.f_measure,
        "extracted": m.extracted_so_far,
        "judged_correct": m.judged_correct,
        "matching": m.matching,
        "answer_size": m.answer_size,
        "new_candidates": new_candidates,
    }
    row.update(state.counts())
    return row


def run_iteration(
    state: BootstrapState,
    corpus,
    judge,
    config: BootstrapConfig,
    answers: AnswerSet | None = None,
) -> BootstrapState:
    """One training + extraction + judgment round; returns the new state."""
    iteration = state.iteration + 1
    lexicon = state.lexicon
    # Fold in verdicts recorded since the previous round (service flow or
    # resumed runs) so this round's training data reflects them.
    backlog = [t for t in sorted(state.judgments)
               if state.judgments[t] == ACCEPT and t not in lexicon]
    if backlog:
        lexicon = lexicon.add_entries(backlog)

    models = build_models(
        corpus, lexicon,
        case_insensitive=config.harvest_case_insensitive,
        on_degenerate="epsilon",
        epsilon=config.smoothing_epsilon,
    )
    if not models.left.raw and not models.right.raw:
        logger.warning(
            "iteration %d: no dictionary matches in the corpus; harvest is empty",
            iteration,
        )
    paren_filter = config.paren_filter_all_iterations or iteration >= 2
    new_pool = scan_and_rank(
        corpus, lexicon, models,
        lmin=config.lmin, lmax=config.lmax, top_n=config.top_n,
        min_score=config.min_score, paren_filter=paren_filter,
        iteration=iteration,
    )

    pool = RankedPool(capacity=None)
    pool.merge(state.pool.ranked())
    new_count = 0
    for cand in new_pool.ranked():
        existing = pool.get(cand.text)
        if existing is None:
            new_count += 1
        else:
            # Keep the round the text first appeared in.
            cand = replace(cand, iteration=existing.iteration)
        pool.offer(cand)

    judgments = dict(state.judgments)
    halted = False
    for cand in pool.ranked():
        if cand.text in judgments:
            continue
        try:
            verdict = judge(cand)
        except JudgeUnavailable as exc:
            logger.warning("judge unavailable, leaving remaining items pending: %s", exc)
            halted = True
            break
        if verdict == PENDING:
            continue
        if verdict not in (ACCEPT, REJECT):
            raise ValueError(f"judge returned invalid verdict {verdict!r}")
        judgments[cand.text] = verdict

    accepted_new = [t for t in sorted(judgments)
                    if judgments[t] == ACCEPT and t not in lexicon]
    if accepted_new:
        lexicon = lexicon.add_entries(accepted_new)

    new_state = BootstrapState(
        lexicon=lexicon,
        seeds=state.seeds,
        iteration=iteration,
        pool=pool,
        judgments=judgments,
        history=list(state.history),
        halted=halted,
    )
    new_state.history.append(_snapshot_metrics(new_state, answers, config, new_count))
    return new_state


def run_bootstrap(
    corpus,
    seeds,
    judge,
    config: BootstrapConfig,
    answers: AnswerSet | None = None,
    checkpoint_path=None,
    state: BootstrapState | None = None,
) -> BootstrapState:
    """Apply run_iteration up to ``config.iterations`` times (resumable).

    Pass ``state`` (e.g. from load_state) to resume; already-completed
    iterations are not repeated.
    """
    if config.iterations < 1:
        raise ValueError("iterations must be >= 1")
    if state is None:
        state = BootstrapState(lexicon=Lexicon(seeds), seeds=frozenset(seeds))
    # An explicit (re)start retries a run halted by judge failure; the next
    # round's judgment step picks the pending backlog up again.
    state.halted = False
    while state.iteration < config.iterations and not state.halted:
        state = run_iteration(state, corpus, judge, config, answers)
        if checkpoint_path is not None:
            save_state(state, checkpoint_path, config=config)
    return state


def format_report_tsv(history: list[dict]) -> str:
    """Cumulative metrics, one column per iteration, one metric per row."""
    iterations = [str(row["iteration"]) for row in history]
    lines = ["metric\t" + "\t".join(iterations)]
    for name in ("precision", "recall", "f_measure"):
        lines.append(name + "\t" + "\t".join("%.3f" % row[name] for row in history))
    for name in ("extracted", "judged_correct", "matching", "new_candidates",
                 "accepted", "rejected", "pending", "lexicon_size"):
        lines.append(name + "\t" + "\t".join("%d" % row[name] for row in history))
    return "\n".join(lines) + "\n"


def _bigram_to_json(bigram) -> list:
    return [c for c in bigram]


def _bigram_from_json(value) -> tuple:
    if not isinstance(value, list) or len(value) != 2:
        raise CheckpointError(f"bad bigram value: {value!r}")
    return (value[0], value[1])


def save_state(state: BootstrapState, path, config: BootstrapConfig | None = None) -> None:
    """Atomic (write-then-rename) checkpoint of the whole bootstrap state."""
    doc = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "iteration": state.iteration,
        "halted": state.halted,
        "seeds": sorted(state.seeds),
        "lexicon": state.lexicon.sorted_entries(),
        "lexicon_generation": state.lexicon.generation,
        "pool": [
            {
                "text": c.text,
                "score": c.score,
                "left": _bigram_to_json(c.left),
                "right": _bigram_to_json(c.right),
                "article_id": c.article_id,
                "start": c.start,
                "iteration": c.iteration,
            }
            for c in state.pool.ranked()
        ],
        "judgments": {t: state.judgments[t] for t in sorted(state.judgments)},
        "history": state.history,
    }
    if config is not None:
        doc["config"] = config.to_dict()
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, indent=1)
        fh.write("\n")
    os.replace(tmp, path)


def load_state(path) -> tuple[BootstrapState, BootstrapConfig | None]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    if doc.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"{path} is not a bootstrap checkpoint")
    if doc.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {doc.get('version')!r}")
    try:
        pool = RankedPool(capacity=None)
        for item in doc["pool"]:
            pool.offer(ScoredCandidate(
                text=item["text"],
                score=float(item["score"]),
                left=_bigram_from_json(item["left"]),
                right=_bigram_from_json(item["right"]),
                article_id=item["article_id"],
                start=int(item["start"]),
                iteration=int(item["iteration"]),
            ))
        state = BootstrapState(
            lexicon=Lexicon(doc["lexicon"], generation=int(doc.get("lexicon_generation", 0))),
            seeds=frozenset(doc["seeds"]),
            iteration=int(doc["iteration"]),
            pool=pool,
            judgments=dict(doc["judgments"]),
            history=list(doc["history"]),
            halted=bool(doc.get("halted", False)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"corrupt checkpoint {path}: {exc}") from exc
    return state, (BootstrapConfig.from_dict(doc["config"]) if "config" in doc else None)


def pool_tsv(state: BootstrapState) -> str:
    return format_pool_tsv(state.pool.ranked())
