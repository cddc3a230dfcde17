"""
Classical binned reliability diagrams.

The subpopulation and the full population are binned separately and each
nonempty bin contributes the pair (average score, average result), weighted
when the data carry varying weights. Three ways of choosing the bins are
available:

``equispaced-scores``
    ``target_bins - 1`` equispaced thresholds between the least and greatest
    score.
``equal-count``
    every bin holds ``count // target_bins`` scores, the rightmost bin also
    holding the remainder.
``equal-norm-ratio``
    bins grown greedily so that ``||W||_2 / ||W||_1`` over each bin is similar;
    with uniform weights this yields bins of nearly equal counts.

Thresholds always sit at the midpoint between consecutive scores (except for
``equispaced-scores``), and bins are half-open on the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import _readonly, _use_weights
from .errors import InvalidInputError

__all__ = [
    "KINDS",
    "BinScheme",
    "ReliabilityDiagram",
    "bin_edges",
    "binned_points",
    "reliability_diagram",
]

KINDS = ("equispaced-scores", "equal-count", "equal-norm-ratio")
_ALIASES = {
    "equispaced": "equispaced-scores",
    "equal-norm": "equal-norm-ratio",
}


@dataclass(frozen=True)
class BinScheme:
    """How to bin: ``kind``, desired number of bins, and the seed used only by
    ``equal-norm-ratio`` for its random permutation."""

    kind: str
    target_bins: int
    seed: int = 0

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise InvalidInputError(
                f"unknown binning kind {self.kind!r}; expected one of {KINDS}")
        if int(self.target_bins) != self.target_bins or self.target_bins < 1:
            raise InvalidInputError("target_bins must be a positive integer")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "target_bins", int(self.target_bins))


@dataclass(frozen=True, eq=False)
class ReliabilityDiagram:
    """
    Points of a reliability diagram and the bins behind them.

    ``sub_points`` and ``full_points`` are ``(count, 2)`` arrays of
    ``(X, Y)`` pairs, one per nonempty bin; ``sub_mass`` and ``full_mass``
    hold the count (or total weight) of every bin, empty ones included.
    When ``reference`` is ``"diagonal"`` the full-population side is empty
    and the ideal line ``y = x`` stands in for it.
    """

    sub_points: np.ndarray
    full_points: np.ndarray
    sub_edges: np.ndarray
    full_edges: np.ndarray
    sub_mass: np.ndarray
    full_mass: np.ndarray
    reference: str = "full"

    def __post_init__(self):
        for name in ("sub_points", "full_points"):
            arr = _readonly(getattr(self, name)).reshape(-1, 2)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name in ("sub_edges", "full_edges", "sub_mass", "full_mass"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))
        if self.reference not in ("full", "diagonal"):
            raise InvalidInputError("reference must be 'full' or 'diagonal'")
        if self.sub_points.shape[0] == 0:
            raise InvalidInputError("a reliability diagram needs a point")


def _check_sorted(scores, weights):
    scores = np.asarray(scores, dtype=float)
    if scores.ndim != 1 or scores.size == 0:
        raise InvalidInputError("scores must be a nonempty 1-D sequence")
    if np.any(np.diff(scores) < 0):
        raise InvalidInputError("scores must be sorted")
    if weights is None:
        weights = np.ones(scores.size)
    else:
        weights = np.asarray(weights, dtype=float)
        if weights.shape != scores.shape:
            raise InvalidInputError("weights and scores differ in length")
        if np.any(weights <= 0):
            raise InvalidInputError("weights must be positive")
    return scores, weights


def _norm_ratio(weights):
    # running sums in index order, shared by the target and the bin growth
    return math.sqrt(np.cumsum(weights ** 2)[-1]) / np.cumsum(weights)[-1]


def _equal_norm_edges(scores, weights, target, seed):
    n = scores.size
    take = n // target
    perm = np.random.default_rng(seed).permutation(n)[:take]
    bound = _norm_ratio(weights[perm])
    edges = []
    counts = []
    start = 0
    while start < n:
        end = start
        s1 = 0.0
        s2 = 0.0
        while end < n:
            s1 += weights[end]
            s2 += weights[end] ** 2
            end += 1
            if math.sqrt(s2) / s1 <= bound:
                break
        counts.append(end - start)
        if end < n:
            edges.append((scores[end - 1] + scores[end]) / 2)
        start = end
    if len(counts) > 1 and counts[-1] < counts[-2] / 2:
        edges.pop()
    return np.array(edges)


def bin_edges(scheme, scores, weights=None):
    """
    Interior thresholds ``B_1, ..., B_{l-1}`` for binning sorted ``scores``.

    Parameters
    ----------
    scheme : BinScheme
    scores : array_like
        sorted scores (ties are tolerated, though they may unbalance bins)
    weights : array_like, optional
        positive weights; only ``equal-norm-ratio`` looks at them

    Returns
    -------
    ndarray
        nondecreasing thresholds; bin ``k`` is ``(B_{k-1}, B_k]`` with
        ``B_0 = -inf`` and ``B_l = +inf``
    """
    scores, weights = _check_sorted(scores, weights)
    target = scheme.target_bins
    if target > scores.size:
        raise InvalidInputError(
            f"{target} bins requested for only {scores.size} scores")
    if scheme.kind == "equispaced-scores":
        lo, hi = scores[0], scores[-1]
        return np.array([lo + (hi - lo) * k / target
                         for k in range(1, target)])
    if scheme.kind == "equal-count":
        per = scores.size // target
        cut = np.arange(1, target) * per
        return (scores[cut - 1] + scores[cut]) / 2
    return _equal_norm_edges(scores, weights, target, scheme.seed)


def binned_points(scores, results, edges, weights=None):
    """
    Average score and result in every bin delimited by ``edges``.

    Returns the ``(X, Y)`` pairs of the nonempty bins and the mass (count, or
    weight total when ``weights`` is given) of every bin.
    """
    scores = np.asarray(scores, dtype=float)
    results = np.asarray(results, dtype=float)
    edges = np.asarray(edges, dtype=float)
    nbins = edges.size + 1
    idx = np.searchsorted(edges, scores, side="left")
    if weights is None:
        mass = np.bincount(idx, minlength=nbins).astype(float)
        sx = np.bincount(idx, weights=scores, minlength=nbins)
        sy = np.bincount(idx, weights=results, minlength=nbins)
    else:
        w = np.asarray(weights, dtype=float)
        mass = np.bincount(idx, weights=w, minlength=nbins)
        sx = np.bincount(idx, weights=w * scores, minlength=nbins)
        sy = np.bincount(idx, weights=w * results, minlength=nbins)
    full = mass > 0
    points = np.column_stack([sx[full] / mass[full], sy[full] / mass[full]])
    return points, mass


def reliability_diagram(dataset, sub_scheme, full_scheme=None, *,
                        weighted=None):
    """
    Reliability diagram comparing the subpopulation with the full population.

    Parameters
    ----------
    dataset : Dataset
    sub_scheme : BinScheme
        binning of the subpopulation's scores
    full_scheme : BinScheme, optional
        binning of the full population's scores; defaults to ``sub_scheme``
    weighted : bool, optional
        weighted averages; by default used only when the weights vary

    Returns
    -------
    ReliabilityDiagram
    """
    if full_scheme is None:
        full_scheme = sub_scheme
    weighted = _use_weights(dataset, weighted)
    w = None
    if weighted:
        w = dataset.weights if dataset.weights is not None \
            else np.ones(dataset.m)
    sub = dataset.subpop
    sub_w = None if w is None else w[sub]
    sub_edges = bin_edges(sub_scheme, dataset.scores[sub], sub_w)
    full_edges = bin_edges(full_scheme, dataset.scores, w)
    sub_points, sub_mass = binned_points(
        dataset.scores[sub], dataset.results[sub], sub_edges, sub_w)
    full_points, full_mass = binned_points(
        dataset.scores, dataset.results, full_edges, w)
    return ReliabilityDiagram(sub_points, full_points, sub_edges, full_edges,
                              sub_mass, full_mass)
