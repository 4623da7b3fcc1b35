"""Benchmark reporting statistics.

Per-cell summaries over repeated runs, plus a nonparametric comparison of
several algorithms over several problems using aligned ranks: observations
are aligned by subtracting each problem's row mean, all aligned values are
ranked jointly (average ranks on ties), and a chi-squared statistic over the
column rank sums tests whether the algorithms perform equally.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.stats as ss

__all__ = ["FriedmanAligned", "Summary", "cell_mean", "friedman_aligned", "summarize"]


class Summary(NamedTuple):
    mean: float
    std: float
    best: float
    worst: float
    median: float


class FriedmanAligned(NamedTuple):
    avg_ranks: np.ndarray
    statistic: float
    p_value: float
    n_problems: int
    n_algorithms: int


def summarize(values):
    """Summary statistics of a non-empty sample.

    The standard deviation uses the n-1 normalization; a single observation
    reports 0 by convention.  Best is the minimum, worst the maximum.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("cannot summarize an empty sample")
    std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return Summary(
        mean=float(np.mean(values)),
        std=std,
        best=float(np.min(values)),
        worst=float(np.max(values)),
        median=float(np.median(values)),
    )


def cell_mean(final_f, final_phi):
    """Representative value of one problem/algorithm cell over repeated runs.

    Returns (value, used_violation): the mean final objective over feasible
    runs when any exist, otherwise the mean final violation with the flag
    set.
    """
    final_f = np.asarray(final_f, dtype=float)
    final_phi = np.asarray(final_phi, dtype=float)
    if final_f.size == 0 or final_f.shape != final_phi.shape:
        raise ValueError("need matching non-empty objective and violation samples")
    feasible = final_phi == 0.0
    if feasible.any():
        return float(np.mean(final_f[feasible])), False
    return float(np.mean(final_phi)), True


def friedman_aligned(cell_means):
    """Aligned-ranks comparison of k algorithms over n problems.

    Parameters
    ----------
    cell_means : array_like, shape (n, k)
        One representative value per problem (row) and algorithm (column);
        smaller is better.  Requires n >= 2 and k >= 2 and no missing
        values.

    Returns
    -------
    FriedmanAligned
        Average aligned rank per algorithm, the chi-squared statistic with
        k - 1 degrees of freedom, and its upper-tail p-value.
    """
    m = np.asarray(cell_means, dtype=float)
    if m.ndim != 2:
        raise ValueError("expected a 2-d matrix of cell means")
    n, k = m.shape
    if n < 2 or k < 2:
        raise ValueError("need at least 2 problems and 2 algorithms")
    bad = ~np.isfinite(m)
    if bad.any():
        cells = [tuple(int(v) for v in pos) for pos in np.argwhere(bad)]
        raise ValueError(f"missing or non-finite cells at {cells}")

    aligned = m - m.mean(axis=1, keepdims=True)
    ranks = ss.rankdata(aligned.ravel()).reshape(n, k)

    col_sums = ranks.sum(axis=0)
    row_sums = ranks.sum(axis=1)
    total = k * n
    numerator = (k - 1) * (col_sums @ col_sums - (k * n**2 / 4.0) * (total + 1) ** 2)
    denominator = total * (total + 1) * (2 * total + 1) / 6.0 - row_sums @ row_sums / k
    statistic = float(numerator / denominator)
    p_value = float(ss.chi2.sf(statistic, k - 1))
    return FriedmanAligned(
        avg_ranks=ranks.mean(axis=0),
        statistic=statistic,
        p_value=p_value,
        n_problems=n,
        n_algorithms=k,
    )
