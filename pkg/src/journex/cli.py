"""Command-line entry points: ingest, tables, scan, bootstrap, eval, serve, synth."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .bootstrap import (
    BootstrapConfig,
    JudgeUnavailable,
    format_report_tsv,
    headless_judge,
    load_state,
    pool_tsv,
    recorded_judge,
    run_bootstrap,
)
from .contexts import build_models
from .corpus import (
    DEFAULT_FILTER_TERMS,
    Diagnostic,
    filter_articles,
    load_corpus_file,
    serialize_corpus,
)
from .evaluate import AnswerSet, build_answer_list, compute_metrics
from .lexicon import DEFAULT_SEEDS, load_lexicon_file, save_lexicon_file
from .ngram import format_table_tsv
from .scan import format_pool_tsv, parse_pool_tsv, scan_and_rank

logger = logging.getLogger(__name__)


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def _write_text(path, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def make_judge(spec: str, *, case_insensitive: bool = False):
    """Judge factory for --judge specs: none | oracle:FILE | service:URL."""
    if spec == "none":
        return recorded_judge({})
    kind, _, arg = spec.partition(":")
    if kind == "oracle":
        names = {line.strip() for line in _read_lines(arg) if line.strip()}
        return headless_judge(names, case_insensitive=case_insensitive)
    if kind == "service":
        import requests

        def judge(cand):
            try:
                resp = requests.post(
                    arg,
                    json={
                        "text": cand.text,
                        "score": cand.score,
                        "left": list(cand.left),
                        "right": list(cand.right),
                    },
                    timeout=30,
                )
                resp.raise_for_status()
                return resp.json()["verdict"]
            except (requests.RequestException, KeyError, ValueError) as exc:
                raise JudgeUnavailable(str(exc)) from exc

        return judge
    raise ValueError(f"unknown judge spec {spec!r}")


def cmd_ingest(args) -> int:
    diagnostics: list[Diagnostic] = []
    articles = load_corpus_file(args.input, strict=args.strict,
                                normalize_nfc=args.nfc, diagnostics=diagnostics)
    if args.filter_terms:
        terms = [t for t in args.filter_terms.split(",") if t]
        articles = filter_articles(articles, terms)
    _write_text(args.output, serialize_corpus(articles))
    for d in diagnostics:
        print(f"skipped line {d.line_no}: {d.reason}", file=sys.stderr)
    print(f"kept {len(articles)} articles", file=sys.stderr)
    return 0


def cmd_tables(args) -> int:
    articles = load_corpus_file(args.corpus, strict=False)
    lexicon = load_lexicon_file(args.lexicon)
    models = build_models(articles, lexicon, epsilon=args.epsilon)
    os.makedirs(args.output_dir, exist_ok=True)
    for name, table in (("global", models.background), ("left", models.left),
                        ("right", models.right)):
        path = os.path.join(args.output_dir, f"{name}.tsv")
        _write_text(path, format_table_tsv(table))
    print(f"wrote 3 tables to {args.output_dir}", file=sys.stderr)
    return 0


def cmd_scan(args) -> int:
    articles = load_corpus_file(args.corpus, strict=False)
    lexicon = load_lexicon_file(args.lexicon)
    models = build_models(articles, lexicon, epsilon=args.epsilon)
    pool = scan_and_rank(
        articles, lexicon, models,
        lmin=args.lmin, lmax=args.lmax, top_n=args.top,
        min_score=args.min_score,
        paren_filter=not args.no_paren_filter,
    )
    _write_text(args.output, format_pool_tsv(pool.ranked()))
    print(f"ranked {len(pool)} candidates", file=sys.stderr)
    return 0


def cmd_bootstrap(args) -> int:
    articles = load_corpus_file(args.corpus, strict=False)
    judge = make_judge(args.judge, case_insensitive=args.judge_case_insensitive)
    answers = None
    if args.answers:
        names = {line.strip() for line in _read_lines(args.answers) if line.strip()}
        answers = AnswerSet(frozenset(names), case_insensitive=args.judge_case_insensitive)
    config = BootstrapConfig(
        iterations=args.iterations,
        lmin=args.lmin,
        lmax=args.lmax,
        top_n=args.top,
        min_score=args.min_score,
        paren_filter_all_iterations=not args.paren_filter_from_second,
    )
    state = None
    if args.resume:
        state, _ = load_state(args.state)
        seeds = state.seeds
    elif args.seeds:
        seeds = [line.strip() for line in _read_lines(args.seeds) if line.strip()]
    else:
        seeds = list(DEFAULT_SEEDS)
    state = run_bootstrap(
        articles, seeds, judge, config,
        answers=answers,
        checkpoint_path=args.state,
        state=state,
    )
    if args.pool_out:
        _write_text(args.pool_out, pool_tsv(state))
    if args.report_out:
        _write_text(args.report_out, format_report_tsv(state.history))
    if args.lexicon_out:
        save_lexicon_file(state.lexicon, args.lexicon_out)
    counts = state.counts()
    print(
        "iteration %d done: pool=%d accepted=%d pending=%d lexicon=%d%s"
        % (state.iteration, counts["pool_size"], counts["accepted"],
           counts["pending"], counts["lexicon_size"],
           " (halted: judge unavailable)" if state.halted else ""),
        file=sys.stderr,
    )
    return 0


def cmd_eval(args) -> int:
    if args.state:
        state, _ = load_state(args.state)
        _write_text(args.report, format_report_tsv(state.history))
        return 0
    items = parse_pool_tsv(_read_lines(args.pool))
    names = {line.strip() for line in _read_lines(args.answers) if line.strip()}
    answers = AnswerSet(frozenset(names), case_insensitive=args.case_insensitive)
    texts = [c.text for c in items]
    matching = sum(1 for t in set(texts) if t in answers)
    m = compute_metrics(matching, len(texts), matching, len(answers))
    row = {
        "iteration": 1,
        "precision": m.precision,
        "recall": m.recall,
        "f_measure": m.f_measure,
        "extracted": m.extracted_so_far,
        "judged_correct": m.judged_correct,
        "matching": m.matching,
        "answer_size": m.answer_size,
        "new_candidates": len(texts),
        "pool_size": len(texts),
        "accepted": matching,
        "rejected": len(texts) - matching,
        "pending": 0,
        "lexicon_size": 0,
    }
    _write_text(args.report, format_report_tsv([row]))
    return 0


def cmd_answers(args) -> int:
    articles = load_corpus_file(args.corpus, strict=False)
    journal_list = [line.strip() for line in _read_lines(args.journal_list) if line.strip()]
    stop = set()
    if args.stoplist:
        stop = {line.strip() for line in _read_lines(args.stoplist) if line.strip()}
    answers = build_answer_list(journal_list, articles, stop, min_len=args.min_len)
    _write_text(args.output, "".join(n + "\n" for n in sorted(answers.names)))
    print(f"kept {len(answers)} answer names", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(
        state_path=args.state,
        corpus_path=args.corpus,
        port=args.port,
        host=args.host,
        answers_path=args.answers,
        ui_dir=args.ui,
    )
    return 0


def cmd_synth(args) -> int:
    from .synthetic import generate_corpus, write_dataset_files

    dataset = generate_corpus(
        n_articles=args.articles,
        n_targets=args.targets,
        n_seeds=args.seeds,
        rng_seed=args.rng_seed,
    )
    paths = write_dataset_files(dataset, args.output_dir)
    print(json.dumps(paths, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="journex",
        description="Bootstrapped journal-name extraction from TSV news corpora.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a TSV corpus and apply the keyword filter")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--filter-terms", default=",".join(DEFAULT_FILTER_TERMS),
                   help="comma-separated substrings; empty string disables filtering")
    p.add_argument("--strict", action="store_true",
                   help="abort on malformed lines instead of skipping them")
    p.add_argument("--nfc", action="store_true", help="NFC-normalize bodies")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("tables", help="write the smoothed bigram tables as TSV")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--output-dir", required=True)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("scan", help="rank candidate names for one dictionary")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--lmin", type=int, default=2)
    p.add_argument("--lmax", type=int, default=50)
    p.add_argument("--top", type=int, default=2000)
    p.add_argument("--min-score", type=float, default=None)
    p.add_argument("--no-paren-filter", action="store_true")
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bootstrap", help="run judged extraction iterations")
    p.add_argument("--corpus", required=True)
    p.add_argument("--seeds",
                   help="seed dictionary file (one name per line); defaults to the"
                        " built-in 10-name seed list")
    p.add_argument("--iterations", type=int, default=2)
    p.add_argument("--lmin", type=int, default=2)
    p.add_argument("--lmax", type=int, default=50)
    p.add_argument("--top", type=int, default=2000)
    p.add_argument("--min-score", type=float, default=1.0)
    p.add_argument("--paren-filter-from-second", action="store_true",
                   help="apply the parenthesis filter only from iteration 2 on")
    p.add_argument("--judge", default="none",
                   help="none | oracle:answers.txt | service:URL")
    p.add_argument("--judge-case-insensitive", action="store_true")
    p.add_argument("--answers", help="answer list for recall metrics")
    p.add_argument("--state", required=True, help="checkpoint JSON path")
    p.add_argument("--resume", action="store_true",
                   help="resume from --state instead of starting from --seeds")
    p.add_argument("--pool-out")
    p.add_argument("--report-out")
    p.add_argument("--lexicon-out")
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("eval", help="score a pool TSV against an answer list")
    p.add_argument("--pool")
    p.add_argument("--answers")
    p.add_argument("--state", help="checkpoint JSON; report its full history instead")
    p.add_argument("--report", default="-")
    p.add_argument("--case-insensitive", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("answers", help="build correct-answer data from a journal list")
    p.add_argument("--journal-list", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--stoplist")
    p.add_argument("--min-len", type=int, default=10)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_answers)

    p = sub.add_parser("serve", help="serve the review API and UI for a checkpoint")
    p.add_argument("--state", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--port", type=int, default=8400)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--answers")
    p.add_argument("--ui", help="directory with the built frontend bundle")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("synth", help="generate the deterministic synthetic dataset")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--articles", type=int, default=500)
    p.add_argument("--targets", type=int, default=60)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--rng-seed", type=int, default=20160901)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
