"""Character-bigram frequency tables and Simple Good-Turing correction.

A bigram is a pair of consecutive characters; at article boundaries a
missing character is represented by the ``None`` sentinel (rendered as
``<NONE>`` in serialized form).  The sentinel lives outside the character
value space, so sentinel bigrams can never collide with text bigrams.

Smoothing follows the Gale–Sampson Simple Good-Turing procedure: the raw
Turing estimator ``(r+1) * N[r+1] / N[r]`` while it is reliable, switching
permanently to the log-log regression estimate (Z-transform of the
frequency spectrum, least-squares fit of log Z on log r) at the first rank
where the two estimates stop differing significantly or where ``N[r+1]``
is zero.  The unseen-type count is estimated as the squared unigram type
count minus the observed bigram type count, and each unseen type receives
the corrected frequency ``N[1] / N[0]``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

Bigram = tuple  # (char-or-None, char-or-None)

GLOBAL = "GLOBAL"
LEFT = "LEFT"
RIGHT = "RIGHT"

NONE_TOKEN = "<NONE>"

# Confidence width for the Turing-vs-regression switch rule.
_SWITCH_Z = 1.96


class SmoothingDegenerateError(ValueError):
    """No singleton types: the unseen mass N1/N0 is undefined (zero)."""


def bigram_text(bigram: Bigram) -> str:
    """Render a bigram for TSV output, with the literal <NONE> sentinel."""
    return "".join(NONE_TOKEN if c is None else c for c in bigram)


@dataclass(frozen=True)
class FreqTable:
    """Raw bigram counts plus the corpus-wide distinct-character count.

    ``unigram_type_count`` is always the count over the whole dataset, even
    for LEFT/RIGHT tables: the possible-bigram universe is shared, only the
    observed types differ per table.
    """

    counts: dict
    position: str = GLOBAL
    unigram_type_count: int = 0

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def type_count(self) -> int:
        return len(self.counts)


def count_global_bigrams(articles) -> FreqTable:
    """Count overlapping character bigrams over all article bodies.

    Each article of length L contributes L-1 bigrams; bigrams never cross
    article boundaries.  Characters from length-1 articles still count
    toward the unigram type inventory.
    """
    counts: Counter = Counter()
    chars: set[str] = set()
    for article in articles:
        body = article.body
        chars.update(body)
        for i in range(len(body) - 1):
            counts[(body[i], body[i + 1])] += 1
    return FreqTable(dict(counts), GLOBAL, len(chars))


def estimate_n0(unigram_type_count: int, observed_bigram_types: int) -> int:
    """Unseen bigram type count: unigram types squared minus observed types.

    Floored at 1 so the unseen-mass formula stays finite on degenerate
    (tiny) inputs; at corpus scale the difference is always positive.
    """
    n0 = unigram_type_count * unigram_type_count - observed_bigram_types
    return n0 if n0 > 0 else 1


@dataclass(frozen=True)
class Spectrum:
    """Frequency spectrum: r -> number of types occurring exactly r times."""

    n_of_r: dict[int, int]
    n0: int

    @property
    def total_types(self) -> int:
        return sum(self.n_of_r.values())

    @property
    def total_count(self) -> int:
        return sum(r * n for r, n in self.n_of_r.items())


def spectrum(table: FreqTable) -> Spectrum:
    n_of_r = Counter(table.counts.values())
    return Spectrum(dict(n_of_r), estimate_n0(table.unigram_type_count, table.type_count))


def turing_estimate(n_of_r: dict[int, int], r: int) -> float | None:
    """Raw Turing estimator (r+1) * N[r+1] / N[r]; None where undefined."""
    nr = n_of_r.get(r, 0)
    nr1 = n_of_r.get(r + 1, 0)
    if nr == 0 or nr1 == 0:
        return None
    return (r + 1) * nr1 / nr


def _z_transform(ranks: list[int], n_of_r: dict[int, int]) -> list[float]:
    # Z_r = N_r / (0.5 * (t - q)) with q, t the neighboring nonzero ranks
    # (q = 0 before the first rank, t = 2r - q past the last).
    zs = []
    for j, r in enumerate(ranks):
        q = ranks[j - 1] if j > 0 else 0
        t = ranks[j + 1] if j < len(ranks) - 1 else 2 * r - q
        zs.append(n_of_r[r] / (0.5 * (t - q)))
    return zs


def _fit_loglog(ranks: list[int], zs: list[float]) -> tuple[float, float]:
    # Least squares of log Z on log r.  A single observed rank cannot
    # determine a slope; fall back to a Zipfian slope of -1 through the
    # point, which makes the regression estimate (r+1)*S(r+1)/S(r) = r.
    xs = [math.log(r) for r in ranks]
    ys = [math.log(z) for z in zs]
    if len(ranks) == 1:
        slope = -1.0
        intercept = ys[0] - slope * xs[0]
        return intercept, slope
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    return intercept, slope


def sgt_smooth(spec: Spectrum) -> tuple[dict[int, float], float]:
    """Corrected frequencies GT(r) for observed ranks, plus GT(0).

    Raises SmoothingDegenerateError when N1 = 0 (no singletons, so no
    defensible unseen mass); callers may fall back to additive smoothing.
    All returned values are strictly positive.
    """
    n_of_r = spec.n_of_r
    ranks = sorted(n_of_r)
    if n_of_r.get(1, 0) < 1:
        raise SmoothingDegenerateError("spectrum has no singleton types (N1 = 0)")
    gt_zero = n_of_r[1] / spec.n0

    zs = _z_transform(ranks, n_of_r)
    intercept, slope = _fit_loglog(ranks, zs)

    def regression_gt(r: int) -> float:
        # (r+1) * S(r+1) / S(r) with S(r) = exp(intercept + slope * log r)
        return (r + 1) * math.exp(slope * (math.log(r + 1) - math.log(r)))

    gt: dict[int, float] = {}
    switched = False
    for r in ranks:
        y = regression_gt(r)
        if not switched:
            nr1 = n_of_r.get(r + 1, 0)
            if nr1 == 0:
                switched = True
            else:
                nr = n_of_r[r]
                x = (r + 1) * nr1 / nr
                sd = math.sqrt((r + 1) ** 2 * (nr1 / nr**2) * (1 + nr1 / nr))
                if abs(x - y) <= _SWITCH_Z * sd:
                    switched = True
                else:
                    gt[r] = x
                    continue
        gt[r] = y
    return gt, gt_zero


@dataclass(frozen=True)
class SmoothedTable:
    """Good-Turing-corrected counts with renormalized probabilities.

    ``total_mass`` = sum of corrected frequencies over seen types plus
    ``n0 * gt_zero``; probabilities over seen types plus n0 unseen types
    sum to one by construction.
    """

    corrected: dict
    raw: dict = field(repr=False)
    gt_zero: float = 0.0
    n0: int = 1
    total_mass: float = 0.0
    position: str = GLOBAL
    unigram_type_count: int = 0

    def prob(self, bigram: Bigram) -> float:
        c = self.corrected.get(bigram)
        if c is None:
            return self.gt_zero / self.total_mass
        return c / self.total_mass

    @property
    def prob_unseen(self) -> float:
        return self.gt_zero / self.total_mass

    def log_prob(self, bigram: Bigram) -> float:
        return math.log(self.prob(bigram))


def smooth_table(
    table: FreqTable,
    *,
    on_degenerate: str = "raise",
    epsilon: float = 1e-6,
) -> SmoothedTable:
    """Apply Simple Good-Turing correction to a frequency table.

    ``on_degenerate`` controls the N1 = 0 (or empty-table) case: "raise"
    propagates SmoothingDegenerateError, "epsilon" falls back to additive
    smoothing (corrected = count + epsilon, unseen = epsilon).
    """
    spec = spectrum(table)
    try:
        if not table.counts:
            raise SmoothingDegenerateError("empty table")
        gt, gt_zero = sgt_smooth(spec)
        corrected = {b: gt[c] for b, c in table.counts.items()}
    except SmoothingDegenerateError:
        if on_degenerate != "epsilon":
            raise
        gt_zero = epsilon
        corrected = {b: c + epsilon for b, c in table.counts.items()}
    # fsum: correctly rounded, so the mass (and every probability) is
    # independent of article/insertion order.
    total_mass = math.fsum(corrected.values()) + spec.n0 * gt_zero
    return SmoothedTable(
        corrected=corrected,
        raw=table.counts,
        gt_zero=gt_zero,
        n0=spec.n0,
        total_mass=total_mass,
        position=table.position,
        unigram_type_count=table.unigram_type_count,
    )


def format_table_tsv(table: SmoothedTable) -> str:
    """Serialize for audit and golden tests: header, then sorted rows."""
    lines = [
        "# position=%s\tn0=%d\tgt_zero=%r\ttotal_mass=%r"
        % (table.position, table.n0, table.gt_zero, table.total_mass)
    ]
    rows = sorted((bigram_text(b), b) for b in table.corrected)
    for text, b in rows:
        lines.append(
            "%s\t%d\t%r\t%r" % (text, table.raw[b], table.corrected[b], table.prob(b))
        )
    return "\n".join(lines) + "\n"
