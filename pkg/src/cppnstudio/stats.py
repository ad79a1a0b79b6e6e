"""Hypothesis tests and bootstrap intervals used by the corpus reports.

Wilcoxon is the one-sample signed-rank test of symmetry about zero with the
classical handling: exact zeros are dropped, absolute values are ranked with
average ranks for ties, and the statistic is min(W+, W-). Small samples get
the exact sign-enumeration null (computed by dynamic programming, identical
to enumerating all 2^n sign assignments); larger samples use the normal
approximation with tie and continuity corrections. All tests are two-sided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from .errors import AllZeros, DegenerateSample, TooSmall

EXACT_LIMIT = 25
#: Reported instead of underflowed p-values; p = 0 is never emitted.
MIN_P = math.nextafter(0.0, 1.0)


@dataclass(frozen=True)
class TestReport:
    test: str
    statistic: float
    p_value: float
    n: int
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"test": self.test, "statistic": self.statistic,
                "p_value": self.p_value, "n": self.n, "extras": dict(self.extras)}


@dataclass(frozen=True)
class BootstrapCI:
    statistic: str
    lo: float
    hi: float
    resamples: int
    level: float

    def to_dict(self) -> dict:
        return {"statistic": self.statistic, "lo": self.lo, "hi": self.hi,
                "resamples": self.resamples, "level": self.level}


def _signed_rank_sums(values: np.ndarray) -> tuple[float, float, np.ndarray]:
    ranks = sps.rankdata(np.abs(values))
    w_plus = float(ranks[values > 0].sum())
    w_minus = float(ranks[values < 0].sum())
    return w_plus, w_minus, ranks


def _exact_min_rank_sum_p(ranks: np.ndarray, w_obs: float) -> float:
    """P(min(W+, W-) <= w_obs) under uniform random signs.

    Doubling the (possibly half-integer) average ranks makes every rank an
    integer, so the distribution of 2*W+ is a dense integer convolution; the
    result equals brute-force enumeration of all 2^n sign assignments.
    """
    ranks2 = np.rint(2.0 * ranks).astype(np.int64)
    total2 = int(ranks2.sum())
    counts = np.zeros(total2 + 1, dtype=float)
    counts[0] = 1.0
    for r in ranks2:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:counts.size - r]
        counts = counts + shifted
    w2 = int(np.rint(2.0 * w_obs))
    sums = np.arange(total2 + 1)
    hits = counts[np.minimum(sums, total2 - sums) <= w2].sum()
    return float(hits / counts.sum())


def wilcoxon_signed_rank(values) -> TestReport:
    """Two-sided one-sample Wilcoxon signed-rank test against zero."""
    arr = np.asarray(values, dtype=float)
    n_zero = int(np.sum(arr == 0.0))
    nz = arr[arr != 0.0]
    n = nz.size
    if n == 0:
        raise AllZeros("every value is exactly zero")

    w_plus, w_minus, ranks = _signed_rank_sums(nz)
    w = min(w_plus, w_minus)
    extras = {"n_nonzero": n, "n_zero": n_zero, "w_plus": w_plus, "w_minus": w_minus}

    if n <= EXACT_LIMIT:
        p = _exact_min_rank_sum_p(ranks, w)
        extras["method"] = "exact"
    else:
        mu = n * (n + 1) / 4.0
        var = n * (n + 1) * (2 * n + 1) / 24.0
        _, tie_counts = np.unique(np.abs(nz), return_counts=True)
        var -= float(np.sum(tie_counts ** 3 - tie_counts)) / 48.0
        z = (w - mu + 0.5) / math.sqrt(var)
        p = 2.0 * sps.norm.cdf(z)
        extras["method"] = "normal"
    p = min(max(float(p), MIN_P), 1.0)
    return TestReport(test="wilcoxon", statistic=w, p_value=p, n=n, extras=extras)


def pearson(x, y) -> TestReport:
    """Pearson product-moment correlation with a two-sided t-test p-value."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.size != ya.size:
        raise ValueError("x and y must have the same length")
    n = xa.size
    if n < 3:
        raise DegenerateSample(f"need at least 3 pairs, got {n}")
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSample("zero variance in a sample")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        p = MIN_P
    else:
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = min(max(2.0 * float(sps.t.sf(abs(t), n - 2)), MIN_P), 1.0)
    return TestReport(test="pearson", statistic=r, p_value=p, n=n, extras={"r": r})


_STATISTICS = {"mean": np.mean, "median": np.median}


def bootstrap_ci(values, statistic: str = "mean", resamples: int = 5000,
                 level: float = 0.95,
                 rng: np.random.Generator | None = None) -> BootstrapCI:
    """Percentile bootstrap confidence interval for the mean or median."""
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        raise TooSmall(f"need at least 2 values, got {arr.size}")
    if statistic not in _STATISTICS:
        raise ValueError(f"statistic must be one of {sorted(_STATISTICS)}")
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    rng = np.random.default_rng() if rng is None else rng
    idx = rng.integers(0, arr.size, size=(resamples, arr.size))
    replicates = _STATISTICS[statistic](arr[idx], axis=1)
    alpha = (1.0 - level) / 2.0
    lo, hi = np.percentile(replicates, [100.0 * alpha, 100.0 * (1.0 - alpha)])
    return BootstrapCI(statistic=statistic, lo=float(lo), hi=float(hi),
                       resamples=resamples, level=level)
