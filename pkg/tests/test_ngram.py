import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from journex.corpus import Article, ArticleSet
from journex.ngram import (
    FreqTable,
    SmoothingDegenerateError,
    Spectrum,
    bigram_text,
    count_global_bigrams,
    estimate_n0,
    format_table_tsv,
    sgt_smooth,
    smooth_table,
    spectrum,
    turing_estimate,
)

from oracles import DegenerateSpectrum, sgt_probabilities_oracle


def _articles(*bodies):
    return ArticleSet(tuple(Article(id=f"a{i}", body=b) for i, b in enumerate(bodies)))


class TestCounting:
    def test_overlapping_pairs(self):
        table = count_global_bigrams(_articles("abcab"))
        assert table.counts == {("a", "b"): 2, ("b", "c"): 1, ("c", "a"): 1}
        assert table.unigram_type_count == 3

    def test_single_char_article_has_no_pairs(self):
        table = count_global_bigrams(_articles("a"))
        assert table.counts == {}
        assert table.unigram_type_count == 1  # the char still counts as a type

    def test_aggregates_across_articles(self):
        table = count_global_bigrams(_articles("ab", "ab"))
        assert table.counts == {("a", "b"): 2}

    def test_total_is_sum_of_len_minus_one(self):
        bodies = ["abcab", "", "x", "のの"]
        table = count_global_bigrams(_articles(*bodies))
        assert table.total == sum(max(len(b) - 1, 0) for b in bodies)


class TestN0:
    def test_worked_example(self):
        assert estimate_n0(9, 8) == 73

    def test_small(self):
        assert estimate_n0(3, 3) == 6

    def test_floor(self):
        assert estimate_n0(1, 0) == 1
        assert estimate_n0(2, 4) == 1
        assert estimate_n0(0, 0) == 1


class TestSpectrum:
    def test_tally(self):
        table = FreqTable({("a", "b"): 2, ("b", "c"): 1, ("c", "a"): 1}, unigram_type_count=3)
        spec = spectrum(table)
        assert spec.n_of_r == {1: 2, 2: 1}
        assert spec.n0 == 6

    def test_empty(self):
        spec = spectrum(FreqTable({}, unigram_type_count=4))
        assert spec.n_of_r == {}
        assert spec.n0 == 16

    def test_single_type(self):
        spec = spectrum(FreqTable({("x", "y"): 5}, unigram_type_count=2))
        assert spec.n_of_r == {5: 1}

    @given(st.dictionaries(st.tuples(st.characters(), st.characters()),
                           st.integers(min_value=1, max_value=50), max_size=30))
    def test_type_total_matches(self, counts):
        spec = spectrum(FreqTable(counts, unigram_type_count=10_000))
        assert spec.total_types == len(counts)


class TestSgtSmooth:
    def test_gt_zero_is_singletons_over_unseen(self):
        _, gt_zero = sgt_smooth(Spectrum({1: 2, 2: 1}, n0=73))
        assert gt_zero == pytest.approx(2 / 73, abs=1e-12)

    def test_raw_turing_estimator(self):
        # (r+1) * N[r+1] / N[r] before any switch decision
        assert turing_estimate({1: 4, 2: 2, 3: 1}, 1) == pytest.approx(1.0)
        assert turing_estimate({1: 4, 2: 2, 3: 1}, 3) is None
        assert turing_estimate({2: 1}, 1) is None

    def test_single_rank_spectrum_uses_proportional_fallback(self):
        # One observed rank cannot support a regression; the slope -1
        # fallback makes GT(r) = r and GT(0) = N1/N0.
        gt, gt_zero = sgt_smooth(Spectrum({1: 1}, n0=1))
        assert gt_zero == pytest.approx(1.0)
        assert gt[1] == pytest.approx(1.0, abs=1e-12)
        gt, gt_zero = sgt_smooth(Spectrum({1: 8}, n0=73))
        assert gt[1] == pytest.approx(1.0, abs=1e-12)
        assert gt_zero == pytest.approx(8 / 73, abs=1e-12)

    def test_degenerate_without_singletons(self):
        with pytest.raises(SmoothingDegenerateError):
            sgt_smooth(Spectrum({2: 3}, n0=10))

    def test_all_outputs_positive(self):
        gt, gt_zero = sgt_smooth(Spectrum({1: 5, 2: 3, 3: 1, 7: 1}, n0=100))
        assert gt_zero > 0
        assert all(v > 0 for v in gt.values())

    def test_gapless_spectrum_matches_turing_before_switch(self):
        # Construct a spectrum where the Turing and regression estimates
        # differ wildly at r=1, so the raw estimator must be used there.
        spec = Spectrum({1: 1000, 2: 2, 3: 1}, n0=10_000)
        gt, _ = sgt_smooth(spec)
        assert gt[1] == pytest.approx(turing_estimate(spec.n_of_r, 1))


def _partitions(total):
    """All frequency spectra {r: N_r} with sum(r * N_r) == total."""

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

    yield from rec(total, total)


class TestOracleEquivalence:
    @pytest.mark.parametrize("n0", [1, 5, 977])
    def test_probabilities_match_oracle_small_spectra(self, n0):
        checked = 0
        for total in range(1, 13):
            for n_of_r in _partitions(total):
                if n_of_r.get(1, 0) < 1:
                    with pytest.raises(SmoothingDegenerateError):
                        sgt_smooth(Spectrum(n_of_r, n0=n0))
                    with pytest.raises(DegenerateSpectrum):
                        sgt_probabilities_oracle(n_of_r, n0)
                    continue
                gt, gt_zero = sgt_smooth(Spectrum(n_of_r, n0=n0))
                mass = sum(n * gt[r] for r, n in n_of_r.items()) + n0 * gt_zero
                ref_probs, ref_unseen = sgt_probabilities_oracle(n_of_r, n0)
                for r in n_of_r:
                    assert gt[r] / mass == pytest.approx(float(ref_probs[r]), abs=1e-9)
                assert gt_zero / mass == pytest.approx(float(ref_unseen), abs=1e-9)
                total_prob = sum(n * gt[r] / mass for r, n in n_of_r.items())
                total_prob += n0 * gt_zero / mass
                assert total_prob == pytest.approx(1.0, abs=1e-9)
                checked += 1
        assert checked == 195  # non-degenerate partitions of 1..12


class TestSmoothTable:
    def _table(self):
        return FreqTable({("a", "b"): 2, ("b", "c"): 1, ("c", "a"): 1},
                         unigram_type_count=9)

    def test_total_mass_expansion(self):
        smoothed = smooth_table(self._table())
        gt, gt_zero = sgt_smooth(spectrum(self._table()))
        expected = gt[2] + 2 * gt[1] + smoothed.n0 * gt_zero
        assert smoothed.total_mass == pytest.approx(expected, rel=1e-12)

    def test_unseen_probability_positive(self):
        smoothed = smooth_table(self._table())
        assert smoothed.prob(("z", "z")) > 0
        assert smoothed.prob(("z", "z")) == smoothed.prob_unseen

    def test_probabilities_normalize(self):
        smoothed = smooth_table(self._table())
        total = sum(smoothed.prob(b) for b in smoothed.corrected)
        total += smoothed.n0 * smoothed.prob_unseen
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_degenerate_raises_by_default(self):
        table = FreqTable({("a", "b"): 3}, unigram_type_count=4)
        with pytest.raises(SmoothingDegenerateError):
            smooth_table(table)

    def test_epsilon_fallback(self):
        table = FreqTable({("a", "b"): 3}, unigram_type_count=4)
        smoothed = smooth_table(table, on_degenerate="epsilon", epsilon=1e-6)
        assert smoothed.gt_zero == pytest.approx(1e-6)
        assert smoothed.corrected[("a", "b")] == pytest.approx(3 + 1e-6)
        total = smoothed.prob(("a", "b")) + smoothed.n0 * smoothed.prob_unseen
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_empty_table_epsilon(self):
        table = FreqTable({}, unigram_type_count=3)
        smoothed = smooth_table(table, on_degenerate="epsilon", epsilon=0.5)
        assert smoothed.total_mass == pytest.approx(9 * 0.5)

    @given(
        st.dictionaries(
            st.tuples(st.sampled_from("abcdef"), st.sampled_from("abcdef")),
            st.integers(min_value=1, max_value=9),
            min_size=1,
            max_size=20,
        )
    )
    @settings(max_examples=60)
    def test_mass_always_one(self, counts):
        table = FreqTable(counts, unigram_type_count=30)
        smoothed = smooth_table(table, on_degenerate="epsilon")
        total = sum(smoothed.prob(b) for b in counts)
        total += smoothed.n0 * smoothed.prob_unseen
        assert total == pytest.approx(1.0, abs=1e-9)
        assert all(smoothed.prob(b) > 0 for b in counts)


class TestSerialization:
    def test_tsv_shape(self):
        table = FreqTable({("a", "b"): 2, ("b", None): 1, ("c", "a"): 1},
                          unigram_type_count=9)
        smoothed = smooth_table(table)
        text = format_table_tsv(smoothed)
        lines = text.splitlines()
        assert lines[0].startswith("# position=GLOBAL\tn0=")
        assert len(lines) == 1 + len(table.counts)
        assert any(line.startswith("b<NONE>\t1\t") for line in lines)
        # rows sorted by rendered bigram
        rendered = [line.split("\t")[0] for line in lines[1:]]
        assert rendered == sorted(rendered)

    def test_bigram_text(self):
        assert bigram_text(("学", "誌")) == "学誌"
        assert bigram_text((None, "あ")) == "<NONE>あ"
        assert bigram_text((None, None)) == "<NONE><NONE>"
