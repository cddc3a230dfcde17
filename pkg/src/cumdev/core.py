"""
Cumulative differences between a subpopulation and the full population.

A subpopulation (indices ``subpop`` into the score-sorted full population) is
compared against the full population by matching every subpopulation member
with the full-population members whose scores fall in a bin around its own
score. The bin edges are the midpoints between consecutive subpopulation
scores, so each bin holds exactly one subpopulation member. Accumulating the
member-by-member differences gives a curve whose secant slopes estimate the
deviation of the subpopulation over ranges of scores; the Kolmogorov-Smirnov
statistic (maximum absolute ordinate) and the Kuiper statistic (range of the
ordinates, origin included) summarize it, and ``sigma`` gives the scale of the
purely random fluctuations expected when there is no deviation.

Indices are 0-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "Dataset",
    "CumulativeCurve",
    "SummaryStats",
    "CumulativeSums",
    "midpoint_bins",
    "binned_full_means",
    "sigma_scale",
    "cumulative_curve",
    "cumulative_sums",
    "restrict_curve",
    "members_in_range",
    "kolmogorov_smirnov",
    "kuiper",
    "shifted_ordinates",
    "summarize",
]


def _readonly(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Scored observations together with a subpopulation of interest.

    Parameters
    ----------
    scores : array_like
        strictly increasing real scores, one per member of the full population
    results : array_like
        observed outcomes paired with ``scores``
    subpop : array_like of int
        strictly increasing 0-based indices of the subpopulation members
    weights : array_like, optional
        strictly positive sampling weights; omitted means uniform weighting
    """

    scores: np.ndarray
    results: np.ndarray
    subpop: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        scores = _readonly(self.scores)
        results = _readonly(self.results)
        subpop = _readonly(self.subpop, dtype=np.int64)
        if scores.ndim != 1 or results.ndim != 1 or subpop.ndim != 1:
            raise InvalidInputError("scores, results, and subpop must be 1-D")
        m = scores.size
        if m == 0:
            raise InvalidInputError("the full population is empty")
        if results.size != m:
            raise InvalidInputError(
                f"results has length {results.size}, expected {m}")
        if not (np.all(np.isfinite(scores)) and np.all(np.isfinite(results))):
            raise InvalidInputError("scores and results must be finite")
        if np.any(np.diff(scores) <= 0):
            raise InvalidInputError("scores must be strictly increasing")
        if subpop.size == 0:
            raise InvalidInputError("the subpopulation is empty")
        if subpop[0] < 0 or subpop[-1] >= m or np.any(np.diff(subpop) <= 0):
            raise InvalidInputError(
                "subpop must be strictly increasing indices in [0, m)")
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "results", results)
        object.__setattr__(self, "subpop", subpop)
        if self.weights is not None:
            weights = _readonly(self.weights)
            if weights.shape != scores.shape:
                raise InvalidInputError(
                    f"weights has length {weights.size}, expected {m}")
            if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
                raise InvalidInputError("weights must be finite and positive")
            object.__setattr__(self, "weights", weights)

    @property
    def m(self):
        return self.scores.size

    @property
    def n(self):
        return self.subpop.size

    @property
    def has_varying_weights(self):
        return self.weights is not None and bool(
            np.any(self.weights != self.weights[0]))

    @property
    def is_binary(self):
        return bool(np.all((self.results == 0) | (self.results == 1)))

    def with_results(self, results):
        """Copy of the dataset with ``results`` swapped in."""
        return Dataset(self.scores, results, self.subpop, self.weights)


@dataclass(frozen=True, eq=False)
class CumulativeCurve:
    """
    Points of a cumulative-difference graph (the origin is implicit).

    ``abscissae`` are ``k/n`` without weights and the normalized cumulative
    subpopulation weights otherwise; ``ordinates`` are the cumulative
    differences; ``scores_at`` labels each point with its score.
    """

    abscissae: np.ndarray
    ordinates: np.ndarray
    scores_at: np.ndarray
    sigma: float
    weighted: bool = False

    def __post_init__(self):
        abscissae = _readonly(self.abscissae)
        ordinates = _readonly(self.ordinates)
        scores_at = _readonly(self.scores_at)
        if abscissae.size == 0:
            raise InvalidInputError("a cumulative curve needs at least 1 point")
        if not (abscissae.shape == ordinates.shape == scores_at.shape):
            raise InvalidInputError("curve arrays must have equal lengths")
        if not self.sigma >= 0:
            raise InvalidInputError("sigma must be nonnegative")
        object.__setattr__(self, "abscissae", abscissae)
        object.__setattr__(self, "ordinates", ordinates)
        object.__setattr__(self, "scores_at", scores_at)
        object.__setattr__(self, "sigma", float(self.sigma))

    @property
    def n(self):
        return self.ordinates.size


@dataclass(frozen=True)
class SummaryStats:
    """Kolmogorov-Smirnov ``g`` and Kuiper ``d``, raw and divided by sigma.

    The normalized fields are ``None`` when ``sigma`` is 0.
    """

    g: float
    d: float
    sigma: float
    g_normalized: float | None
    d_normalized: float | None
    n: int


def _use_weights(dataset, weighted):
    if weighted is None:
        return dataset.has_varying_weights
    return bool(weighted)


def _weights_or_ones(dataset):
    if dataset.weights is None:
        return np.ones(dataset.m)
    return np.asarray(dataset.weights)


def _bin_index(scores, thresholds):
    # bins are half-open on the left: (B_{k-1}, B_k]
    return np.searchsorted(thresholds[1:-1], scores, side="left")


def midpoint_bins(dataset):
    """
    Thresholds ``B_0, ..., B_n`` of the bins matched to subpopulation members.

    ``B_0 = -inf``, ``B_n = +inf``, and ``B_k`` is the midpoint between the
    ``k``th and ``(k+1)``th subpopulation scores, so the bin ``(B_{k-1}, B_k]``
    contains exactly one subpopulation score.
    """
    if dataset.n == 0:
        raise InvalidInputError("the subpopulation is empty")
    sub_scores = dataset.scores[dataset.subpop]
    thresholds = np.empty(dataset.n + 1)
    thresholds[0] = -np.inf
    thresholds[-1] = np.inf
    thresholds[1:-1] = (sub_scores[:-1] + sub_scores[1:]) / 2
    return thresholds


def _bin_sums(dataset, thresholds, weighted):
    idx = _bin_index(dataset.scores, thresholds)
    n = thresholds.size - 1
    if weighted:
        w = _weights_or_ones(dataset)
        mass = np.bincount(idx, weights=w, minlength=n)
        total = np.bincount(idx, weights=w * dataset.results, minlength=n)
    else:
        mass = np.bincount(idx, minlength=n).astype(float)
        total = np.bincount(idx, weights=dataset.results, minlength=n)
    return idx, mass, total


def binned_full_means(dataset, thresholds, *, weighted=None):
    """
    Average full-population result in every subpopulation member's bin.

    Parameters
    ----------
    dataset : Dataset
    thresholds : ndarray
        bin thresholds from :func:`midpoint_bins`
    weighted : bool, optional
        use weighted averages; by default weights are used only when they vary

    Returns
    -------
    ndarray
        one (weighted) mean per subpopulation member
    """
    weighted = _use_weights(dataset, weighted)
    _, mass, total = _bin_sums(dataset, thresholds, weighted)
    if np.any(mass <= 0):
        raise InvalidInputError("every bin must contain a full-population score")
    return total / mass


def _bin_variances(dataset, thresholds, binned_means, weighted, binary):
    binned_means = np.asarray(binned_means, dtype=float)
    if binary:
        return binned_means * (1 - binned_means)
    idx = _bin_index(dataset.scores, thresholds)
    n = thresholds.size - 1
    sq = (dataset.results - binned_means[idx]) ** 2
    if weighted:
        w = _weights_or_ones(dataset)
        mass = np.bincount(idx, weights=w, minlength=n)
        return np.bincount(idx, weights=w * sq, minlength=n) / mass
    mass = np.bincount(idx, minlength=n)
    return np.bincount(idx, weights=sq, minlength=n) / mass


def _sigma(variances, sub_weights):
    if sub_weights is None:
        return float(np.sqrt(np.sum(variances)) / variances.size)
    total = np.cumsum(sub_weights)[-1]
    return float(np.sqrt(np.sum(sub_weights ** 2 * variances)) / total)


def _resolve_binary(dataset, binary):
    return dataset.is_binary if binary is None else bool(binary)


def sigma_scale(dataset, thresholds, binned_means, *, weighted=None,
                binary=None):
    """
    Scale of the random fluctuations expected without any real deviation.

    For binary results (every result 0 or 1) the per-bin variance is the
    Bernoulli variance of the binned mean; otherwise it is the empirical
    variance of the full-population results in the bin. The weighted form
    squares the subpopulation weights in the numerator. Four times ``sigma``
    is the tip-to-tip height of the triangle drawn at the origin.

    Parameters
    ----------
    dataset : Dataset
    thresholds : ndarray
        bin thresholds from :func:`midpoint_bins`
    binned_means : array_like
        output of :func:`binned_full_means` for the same thresholds
    weighted : bool, optional
        by default weights are used only when they vary
    binary : bool, optional
        force the Bernoulli (True) or empirical-variance (False) form;
        by default chosen by whether every result is exactly 0 or 1

    Returns
    -------
    float
    """
    weighted = _use_weights(dataset, weighted)
    binary = _resolve_binary(dataset, binary)
    variances = _bin_variances(dataset, thresholds, binned_means, weighted,
                               binary)
    sub_weights = _weights_or_ones(dataset)[dataset.subpop] if weighted \
        else None
    return _sigma(variances, sub_weights)


class CumulativeSums(NamedTuple):
    """Normalized cumulative sums ``F``, ``F~`` and the abscissae ``A``."""

    f: np.ndarray
    f_tilde: np.ndarray
    abscissae: np.ndarray


def _window_sums(dataset, rtilde, lo, hi, weighted):
    # members lo..hi-1 (0-based) of the subpopulation
    members = dataset.subpop[lo:hi]
    r_sub = dataset.results[members]
    r_full = rtilde[lo:hi]
    if weighted:
        w = _weights_or_ones(dataset)[members]
        cum_w = np.cumsum(w)
        total = cum_w[-1]
        return CumulativeSums(np.cumsum(w * r_sub) / total,
                              np.cumsum(w * r_full) / total, cum_w / total)
    count = hi - lo
    return CumulativeSums(np.cumsum(r_sub) / count, np.cumsum(r_full) / count,
                          np.arange(1, count + 1) / count)


def _window_curve(dataset, lo, hi, weighted, binary):
    # the window's members keep the bins of the whole subpopulation
    thresholds = midpoint_bins(dataset)
    rtilde = binned_full_means(dataset, thresholds, weighted=weighted)
    variances = _bin_variances(dataset, thresholds, rtilde, weighted, binary)
    f, ft, abscissae = _window_sums(dataset, rtilde, lo, hi, weighted)
    members = dataset.subpop[lo:hi]
    w = _weights_or_ones(dataset)[members] if weighted else None
    sigma = _sigma(variances[lo:hi], w)
    return CumulativeCurve(abscissae, f - ft, dataset.scores[members], sigma,
                           weighted=weighted)


def cumulative_sums(dataset, *, weighted=None):
    """
    The two accumulations behind :func:`cumulative_curve`, kept apart.

    Returns
    -------
    CumulativeSums
        ``f`` accumulates subpopulation results and ``f_tilde`` the matched
        binned means, both divided by the count (or total weight) of the
        subpopulation; ``abscissae`` are ``k/n`` or cumulative weights ``A_k``
    """
    weighted = _use_weights(dataset, weighted)
    rtilde = binned_full_means(dataset, midpoint_bins(dataset),
                               weighted=weighted)
    return _window_sums(dataset, rtilde, 0, dataset.n, weighted)


def cumulative_curve(dataset, *, weighted=None, binary=None):
    """
    Cumulative differences between the subpopulation and the full population.

    The ``k``th ordinate is ``F_k - F~_k``, the (weighted) cumulative sum of
    subpopulation results minus the cumulative sum of the matched binned
    full-population means, both normalized by the subpopulation's count (or
    total weight). Secant slopes of the graph against the abscissae estimate
    the deviation of the subpopulation over the corresponding scores.

    Parameters
    ----------
    dataset : Dataset
    weighted : bool, optional
        ``None`` uses the weighted formulas only when the weights vary, which
        makes uniformly weighted data take the unweighted path exactly
    binary : bool, optional
        selects the form of sigma; see :func:`sigma_scale`

    Returns
    -------
    CumulativeCurve
    """
    weighted = _use_weights(dataset, weighted)
    binary = _resolve_binary(dataset, binary)
    return _window_curve(dataset, 0, dataset.n, weighted, binary)


def restrict_curve(dataset, k_max, *, k_min=1, weighted=None, binary=None):
    """
    Curve recomputed over subpopulation members ``k_min..k_max`` only.

    Members are numbered from 1 as along the horizontal axis. The matched bins
    stay those of the whole subpopulation, while the normalization and sigma
    use only the members in the window, so zooming on ``1..k_max`` rescales
    the first ``k_max`` ordinates by ``n / k_max`` (or the analogous ratio of
    weight totals).
    """
    if not 1 <= k_min <= k_max <= dataset.n:
        raise InvalidInputError(
            f"need 1 <= k_min <= k_max <= {dataset.n}, "
            f"got k_min={k_min}, k_max={k_max}")
    weighted = _use_weights(dataset, weighted)
    binary = _resolve_binary(dataset, binary)
    return _window_curve(dataset, k_min - 1, k_max, weighted, binary)


def members_in_range(dataset, lo, hi):
    """1-based ``(k_min, k_max)`` of the subpopulation scores in ``[lo, hi]``."""
    sub_scores = dataset.scores[dataset.subpop]
    k_min = int(np.searchsorted(sub_scores, lo, side="left")) + 1
    k_max = int(np.searchsorted(sub_scores, hi, side="right"))
    if k_max < k_min:
        raise InvalidInputError(
            f"no subpopulation scores lie in [{lo!r}, {hi!r}]")
    return k_min, k_max


def kolmogorov_smirnov(curve):
    """Maximum absolute ordinate of the curve."""
    if curve.n == 0:
        raise InvalidInputError("the curve is empty")
    return float(np.max(np.abs(curve.ordinates)))


def kuiper(curve):
    """Range of the ordinates with the origin's ordinate 0 included."""
    if curve.n == 0:
        raise InvalidInputError("the curve is empty")
    ordinates = curve.ordinates
    return float(max(0.0, np.max(ordinates)) - min(0.0, np.min(ordinates)))


def shifted_ordinates(curve, start):
    """
    Ordinates ``0..n`` when the accumulation starts after member ``start``.

    Sums run forward from ``start`` for later indices and are negated running
    backward for earlier ones; ``start = 0`` returns the origin followed by the
    usual ordinates. Taking max minus min of the result recovers the Kuiper
    statistic for every ``start``.
    """
    n = curve.n
    if not 0 <= start <= n:
        raise InvalidInputError(f"start must lie in [0, {n}], got {start}")
    increments = np.diff(curve.ordinates, prepend=0.0)
    shifted = np.zeros(n + 1)
    shifted[start + 1:] = np.cumsum(increments[start:])
    if start > 0:
        shifted[:start] = -np.cumsum(increments[:start][::-1])[::-1]
    return shifted


def summarize(curve):
    """Kolmogorov-Smirnov and Kuiper statistics of ``curve``, with sigma."""
    g = kolmogorov_smirnov(curve)
    d = kuiper(curve)
    sigma = curve.sigma
    if sigma > 0:
        return SummaryStats(g, d, sigma, g / sigma, d / sigma, curve.n)
    return SummaryStats(g, d, sigma, None, None, curve.n)
