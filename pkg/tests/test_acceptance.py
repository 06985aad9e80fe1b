"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import random
import time

import pytest

from journex.bootstrap import (
    BootstrapConfig,
    format_report_tsv,
    headless_judge,
    pool_tsv,
    run_bootstrap,
)
from journex.evaluate import AnswerSet, compute_metrics, f_measure
from journex.lexicon import Lexicon, longest_match_scan
from journex.ngram import SmoothingDegenerateError, Spectrum, sgt_smooth
from journex.scan import enumerate_candidates
from journex.corpus import Article
from journex.synthetic import generate_corpus

from oracles import (
    DegenerateSpectrum,
    balanced_parens_oracle,
    enumerate_oracle,
    longest_match_oracle,
    sgt_probabilities_oracle,
)

SYNTH_CONFIG = BootstrapConfig(iterations=2, lmin=2, lmax=50, top_n=200)


def _passed(line: str) -> None:
    print(f"\nACCEPTANCE PASS: {line}")


@pytest.fixture(scope="module")
def synthetic_run():
    dataset = generate_corpus(n_articles=500, n_targets=60, n_seeds=5)
    answers = AnswerSet(dataset.answer_names, case_insensitive=False)
    started = time.perf_counter()
    state = run_bootstrap(
        dataset.articles, dataset.seeds, headless_judge(dataset.targets),
        SYNTH_CONFIG, answers=answers,
    )
    elapsed = time.perf_counter() - started
    return dataset, state, elapsed


def test_metrics_fidelity():
    """Reported P/R pairs reproduce the published F values, ±0.001, <1 ms."""
    compute_metrics(1, 2, 1, 2)  # warmup
    started = time.perf_counter()
    f1 = f_measure(0.856, 0.517)
    f2 = f_measure(0.636, 0.587)
    m = compute_metrics(1465, 1712, 536, 1037)
    elapsed = time.perf_counter() - started
    assert f1 == pytest.approx(0.645, abs=0.001)
    assert f2 == pytest.approx(0.611, abs=0.001)
    assert m.precision == pytest.approx(0.856, abs=0.001)
    assert m.recall == pytest.approx(0.517, abs=0.001)
    assert m.f_measure == pytest.approx(0.645, abs=0.001)
    assert elapsed < 0.001
    _passed(
        "metrics fidelity: F(0.856,0.517)=%.3f F(0.636,0.587)=%.3f in %.0f us"
        % (f1, f2, elapsed * 1e6)
    )


def _spectra_up_to(total_max):
    def rec(remaining, max_part):
        if remaining == 0:
            yield {}
            return
        for part in range(min(remaining, max_part), 0, -1):
            for count in range(remaining // part, 0, -1):
                for rest in rec(remaining - part * count, part - 1):
                    d = {part: count}
                    d.update(rest)
                    yield d

    for total in range(1, total_max + 1):
        yield from rec(total, total)


def test_sgt_oracle_equivalence():
    """Exhaustive spectra with total count <= 12 match the exact-arithmetic
    oracle within 1e-9; probability mass is 1 within 1e-9; < 10 s."""
    started = time.perf_counter()
    compared = 0
    for n_of_r in _spectra_up_to(12):
        for n0 in (1, 4, 977):
            if n_of_r.get(1, 0) < 1:
                with pytest.raises(SmoothingDegenerateError):
                    sgt_smooth(Spectrum(n_of_r, n0=n0))
                with pytest.raises(DegenerateSpectrum):
                    sgt_probabilities_oracle(n_of_r, n0)
                continue
            gt, gt_zero = sgt_smooth(Spectrum(n_of_r, n0=n0))
            mass = sum(n * gt[r] for r, n in n_of_r.items()) + n0 * gt_zero
            ref_probs, ref_unseen = sgt_probabilities_oracle(n_of_r, n0)
            for r, n in n_of_r.items():
                assert abs(gt[r] / mass - float(ref_probs[r])) < 1e-9
            assert abs(gt_zero / mass - float(ref_unseen)) < 1e-9
            total = sum(n * gt[r] / mass for r, n in n_of_r.items())
            total += n0 * gt_zero / mass
            assert abs(total - 1.0) < 1e-9
            compared += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    _passed(
        "SGT oracle equivalence: %d spectrum/n0 combinations in %.1f s"
        % (compared, elapsed)
    )


def test_enumeration_oracle():
    """1,000 random strings (len <= 12, 4 symbols) x all 1<=Lmin<=Lmax<=6
    equal the brute-force substring-with-context oracle exactly; < 10 s."""
    rng = random.Random(8412)
    started = time.perf_counter()
    compared = 0
    key = lambda t: (t[3], len(t[0]))
    for case in range(1000):
        body = "".join(rng.choice("ab学「") for _ in range(rng.randint(0, 12)))
        article = Article(id=str(case), body=body)
        for lmin in range(1, 7):
            for lmax in range(lmin, 7):
                got = [
                    (e.text, e.left, e.right, e.start)
                    for e in enumerate_candidates(article, lmin, lmax)
                ]
                ref = enumerate_oracle(body, lmin, lmax)
                assert sorted(got, key=key) == sorted(ref, key=key)
                compared += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0
    _passed(
        "enumeration oracle: %d case/range combinations in %.1f s"
        % (compared, elapsed)
    )


def test_longest_match_oracle():
    """1,000 random (text <= 200 chars, lexicon <= 20 entries) cases match
    the leftmost-longest brute-force oracle exactly."""
    rng = random.Random(99173)
    alphabet = "abABくけ誌「"
    started = time.perf_counter()
    for _ in range(1000):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 200)))
        entries = {
            "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 6)))
            for _ in range(rng.randint(1, 20))
        }
        fold = rng.random() < 0.5
        got = [
            (m.start, m.length, m.entry)
            for m in longest_match_scan(text, Lexicon(entries), case_insensitive=fold)
        ]
        assert got == longest_match_oracle(text, entries, case_insensitive=fold)
    elapsed = time.perf_counter() - started
    _passed("longest-match oracle: 1000 random cases in %.1f s" % elapsed)


def test_end_to_end_distribution_hypothesis(synthetic_run):
    """Scaled-down protocol: 500 articles, 60 planted names in the dominant
    contexts, 5 seeds, 2 judged iterations: >= 90% of planted names in the
    top-200 pool and precision >= 0.80 at iteration 1; < 60 s."""
    dataset, state, elapsed = synthetic_run
    assert elapsed < 60.0
    targets = set(dataset.targets)
    top200 = {c.text for c in state.pool.ranked()[:200]}
    recovered = len(top200 & targets)
    recovery = recovered / len(targets)
    precision_iter1 = state.history[0]["precision"]
    assert recovery >= 0.90
    assert precision_iter1 >= 0.80
    _passed(
        "end-to-end: recovered %d/%d planted names (%.0f%%), "
        "iteration-1 precision %.3f, run took %.1f s"
        % (recovered, len(targets), recovery * 100, precision_iter1, elapsed)
    )


def test_determinism(synthetic_run):
    """A second run with identical inputs is byte-identical on the pool TSV
    and the report TSV."""
    dataset, state, _ = synthetic_run
    answers = AnswerSet(dataset.answer_names, case_insensitive=False)
    again_dataset = generate_corpus(n_articles=500, n_targets=60, n_seeds=5)
    again = run_bootstrap(
        again_dataset.articles, again_dataset.seeds,
        headless_judge(again_dataset.targets), SYNTH_CONFIG, answers=answers,
    )
    assert pool_tsv(again) == pool_tsv(state)
    assert format_report_tsv(again.history) == format_report_tsv(state.history)
    _passed(
        "determinism: rerun pool TSV (%d bytes) and report TSV byte-identical"
        % len(pool_tsv(state).encode("utf-8"))
    )


def test_paren_filter_property(synthetic_run):
    """No pool candidate contains an unmatched 「」『』（）() character."""
    _, state, _ = synthetic_run
    ranked = state.pool.ranked()
    assert ranked
    for cand in ranked:
        assert balanced_parens_oracle(cand.text), cand.text
    _passed(
        "paren filter: all %d pool candidates balanced over the full run"
        % len(ranked)
    )
