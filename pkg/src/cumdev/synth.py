"""
Seeded synthetic examples with known expected outcomes.

Each generator fixes scores, a subpopulation, and Bernoulli success
probabilities ``P`` by explicit formulas, then draws the outcomes. Because
``P`` is returned alongside the sample, the noiseless expected curve is
available for comparison with the sampled one.

Randomness comes from numpy's PCG64 generator. ``SeedSequence(seed)`` is split
with ``spawn(2)``: the first child selects random subpopulations, the second
draws the outcomes. Identical seeds give identical data on every platform.

Several generators mix the full population out of many groups; the group of
member ``j`` (1-based) is summarized by ``u_j = frac(j * 0.618...)``, a
deterministic, evenly spread value in [0, 1) whose local averages are 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .calibration import CalibrationData
from .core import CumulativeCurve, Dataset, cumulative_curve, _readonly
from .errors import InvalidInputError

__all__ = [
    "GroundTruth",
    "CalibrationTruth",
    "GENERATORS",
    "gen_notch",
    "gen_smooth_oscillation",
    "gen_step_oscillation",
    "gen_weighted_outliers",
    "gen_calibration",
    "gen_null",
    "expected_curve",
    "expected_calib_curve",
]

M = 50_000
_GOLDEN = (np.sqrt(5.0) - 1) / 2


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """
    Sampled dataset with the success probabilities that generated it.

    ``regions`` names score intervals with designed behavior (for instance
    the notch); ``outliers`` lists full-population indices altered by hand,
    the subpopulation outlier first.
    """

    probs: np.ndarray
    dataset: Dataset
    regions: dict = field(default_factory=dict)
    outliers: tuple = ()

    def __post_init__(self):
        probs = _readonly(self.probs)
        if probs.shape != self.dataset.scores.shape:
            raise InvalidInputError("probs and scores differ in length")
        if not np.all((probs >= 0) & (probs <= 1)):
            raise InvalidInputError("probs must lie in [0, 1]")
        object.__setattr__(self, "probs", probs)


@dataclass(frozen=True, eq=False)
class CalibrationTruth:
    """Calibration sample with the true success probabilities behind it."""

    probs: np.ndarray
    data: CalibrationData
    regions: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "probs", _readonly(self.probs))


def _streams(seed):
    select, outcomes = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(select), np.random.default_rng(outcomes)


def _bernoulli(rng, probs):
    return (rng.random(probs.size) < probs).astype(float)


def _mixture(j):
    return np.mod(j * _GOLDEN, 1.0)


def _random_subset(rng, m, n):
    return np.sort(rng.permutation(m)[:n])


def gen_notch(seed=0):
    """
    Subpopulation above the full population except in a notch near 0.25.

    * ``m = 50000`` scores ``S_j = ((j - 0.5) / m)**2``, denser near 0.
    * Subpopulation (1-based ``j``), ``n = 5000``: multiples of 20, then three
      refinements around ``m/2`` (the notch centre): ``j % 20 == 10`` with
      ``|j - m/2| < 10000`` (1000 more), ``j % 10 == 5`` with
      ``|j - m/2| < 5000`` (1000 more), ``j % 5 == 2`` with
      ``|j - m/2| < 1250`` (500 more).
    * ``P = 0.25 + 0.3 S + 0.2`` for the subpopulation and
      ``0.25 + 0.3 S + 0.3 (u_j - 0.5)`` for everyone else, so the
      subpopulation sits above every other member at every score.
    * Inside the notch ``|S - 0.25| < 0.02`` every member has ``P = 0.325``,
      making the expected deviation exactly 0 there.
    """
    _, draw = _streams(seed)
    j = np.arange(1, M + 1)
    scores = ((j - 0.5) / M) ** 2
    off = np.abs(j - M // 2)
    member = ((j % 20 == 0)
              | ((j % 20 == 10) & (off < 10000))
              | ((j % 10 == 5) & (off < 5000))
              | ((j % 5 == 2) & (off < 1250)))
    subpop = np.flatnonzero(member)
    assert subpop.size == 5000
    base = 0.25 + 0.3 * scores
    probs = base + 0.3 * (_mixture(j) - 0.5)
    probs[subpop] = base[subpop] + 0.2
    probs[np.abs(scores - 0.25) < 0.02] = 0.325
    ds = Dataset(scores, _bernoulli(draw, probs), subpop)
    return GroundTruth(probs, ds, regions={"notch": (0.235, 0.265),
                                           "deviation": (0.05, 0.2)})


def gen_smooth_oscillation(seed=0):
    """
    Subpopulation whose expectation oscillates smoothly across the range of
    the full population.

    * ``m = 50000`` equispaced scores ``S_j = (j - 0.5) / m``.
    * Subpopulation: ``round(i**(4/3))`` for ``i = 1, 2, ...``, keeping the
      lowest ``n = 3300`` distinct values (1-based ``j``).
    * Subpopulation member of rank ``k`` has ``P = 0.5 + 0.3 sin(8 pi (k -
      0.5) / n)``: four full periods over the subpopulation's scores, whose
      expectations thus sum to exactly ``n / 2``. Everyone else has
      ``0.2 + 0.6 u_j``, which averages 0.5 locally.

    The regions ``rise`` and ``fall`` span the first two half-periods.
    """
    _, draw = _streams(seed)
    j = np.arange(1, M + 1)
    scores = (j - 0.5) / M
    i = np.arange(1, 5000)
    picks = np.unique(np.floor(i ** (4 / 3) + 0.5).astype(np.int64))[:3300]
    subpop = picks - 1
    probs = 0.2 + 0.6 * _mixture(j)
    n = subpop.size
    probs[subpop] = 0.5 + 0.3 * np.sin(8 * np.pi * (np.arange(n) + 0.5) / n)
    ds = Dataset(scores, _bernoulli(draw, probs), subpop)
    s = scores[subpop]
    eighth = n // 8
    return GroundTruth(probs, ds, regions={
        "rise": (s[0], s[eighth - 1]),
        "fall": (s[eighth], s[2 * eighth - 1])})


STEP_LEVELS = (0.2, 0.5, 0.8, 0.5)


def gen_step_oscillation(seed=0):
    """
    Subpopulation whose expectation oscillates in discrete steps.

    * ``m = 50000`` scores ``S_j = sqrt((j - 0.5) / m)``, denser near 1.
    * Subpopulation: the first ``n = 2500`` entries of a seeded random
      permutation of the members, sorted.
    * Subpopulation ``P`` cycles through 0.2, 0.5, 0.8, 0.5 on consecutive
      score intervals of width 1/8 (``step0`` .. ``step7``); everyone else has
      ``0.2 + 0.6 u_j``.
    """
    select, draw = _streams(seed)
    j = np.arange(1, M + 1)
    scores = np.sqrt((j - 0.5) / M)
    subpop = _random_subset(select, M, 2500)
    probs = 0.2 + 0.6 * _mixture(j)
    step = np.minimum(np.floor(8 * scores[subpop]), 7).astype(int)
    probs[subpop] = np.take(STEP_LEVELS, step % 4)
    ds = Dataset(scores, _bernoulli(draw, probs), subpop)
    regions = {f"step{k}": (k / 8, (k + 1) / 8) for k in range(8)}
    return GroundTruth(probs, ds, regions=regions)


def gen_weighted_outliers(seed=0):
    """
    Weighted data with a single heavily weighted subpopulation member.

    * ``m = 50000`` equispaced scores ``S_j = (j - 0.5) / m``, weight 1.
    * Subpopulation: a seeded random subset of ``n = 2500`` members, all with
      ``P = 0``; everyone else belongs to one of four groups (``j % 4``) with
      ``P = 0.1 + 0.1 sin(16 pi S + pi g / 2)``, oscillating in [0, 0.2].
    * Outliers near score 0.75: the subpopulation member closest to 0.75
      whose two nearest neighbors on each side are outside the subpopulation
      gets ``P = 1`` and weight ``0.02 n``; its immediate neighbors below and
      above get ``P = 0`` and ``P = 1``, both with weight ``0.002 m``. Both
      neighbors therefore fall strictly inside the outlier's matched bin.
    """
    select, draw = _streams(seed)
    n = 2500
    j = np.arange(1, M + 1)
    scores = (j - 0.5) / M
    subpop = _random_subset(select, M, n)
    member = np.zeros(M, dtype=bool)
    member[subpop] = True
    probs = 0.1 + 0.1 * np.sin(16 * np.pi * scores + np.pi * (j % 4) / 2)
    probs[subpop] = 0.0
    isolated = [i for i in subpop
                if 2 <= i < M - 2 and not member[[i - 2, i - 1, i + 1, i + 2]]
                .any()]
    outlier = min(isolated, key=lambda i: (abs(scores[i] - 0.75), i))
    weights = np.ones(M)
    probs[outlier] = 1.0
    weights[outlier] = 0.02 * n
    probs[outlier - 1], probs[outlier + 1] = 0.0, 1.0
    weights[outlier - 1] = weights[outlier + 1] = 0.002 * M
    ds = Dataset(scores, _bernoulli(draw, probs), subpop, weights)
    return GroundTruth(probs, ds,
                       regions={"outlier": (scores[outlier],) * 2},
                       outliers=(int(outlier), int(outlier - 1),
                                 int(outlier + 1)))


GENERATORS = {
    "notch": gen_notch,
    "smooth": gen_smooth_oscillation,
    "step": gen_step_oscillation,
    "weighted-outliers": gen_weighted_outliers,
}

CALIBRATION_KINDS = ("linear", "overconfident-notch", "complex")


def gen_calibration(kind, n, seed=0):
    """
    Miscalibrated predictions with known true success probabilities.

    ``kind`` selects the construction (``k = 1..n``):

    ``linear``
        ``S_k = (k - 0.5) / n`` and ``P = 0.1 + 0.8 S``, so the
        miscalibration ``P - S = 0.1 - 0.2 S`` is linear in ``k``.
    ``overconfident-notch``
        ``S_k = ((k - 0.5) / n)**2`` and ``P = S + 0.2 exp(-((S - 0.25) /
        0.12)**2)``, except ``P = S`` in the notch ``|S - 0.25| < 0.02``.
    ``complex``
        ``S_k = sqrt((k - 0.5) / n)`` and ``P = S + 0.12 sin(6 pi S)``
        ``- 0.08`` above 0.8, clipped to [0, 1].

    Returns
    -------
    CalibrationTruth
    """
    if kind not in CALIBRATION_KINDS:
        raise InvalidInputError(
            f"unknown calibration kind {kind!r}; expected {CALIBRATION_KINDS}")
    if int(n) != n or n < 1:
        raise InvalidInputError("n must be a positive integer")
    _, draw = _streams(seed)
    k = np.arange(1, int(n) + 1)
    regions = {}
    if kind == "linear":
        probs = (k - 0.5) / n
        truth = 0.1 + 0.8 * probs
    elif kind == "overconfident-notch":
        probs = ((k - 0.5) / n) ** 2
        truth = probs + 0.2 * np.exp(-(((probs - 0.25) / 0.12) ** 2))
        notch = np.abs(probs - 0.25) < 0.02
        truth[notch] = probs[notch]
        regions["notch"] = (0.23, 0.27)
    else:
        probs = np.sqrt((k - 0.5) / n)
        truth = probs + 0.12 * np.sin(6 * np.pi * probs) - 0.08 * (probs > 0.8)
        truth = np.clip(truth, 0.0, 1.0)
    data = CalibrationData(probs, _bernoulli(draw, truth))
    return CalibrationTruth(truth, data, regions)


def gen_null(n, seed=0):
    """
    Perfectly calibrated sample: ``S_k = ((k - 0.5) / n)**2`` and outcomes
    drawn with success probability exactly ``S_k``.
    """
    if int(n) != n or n < 1:
        raise InvalidInputError("n must be a positive integer")
    _, draw = _streams(seed)
    k = np.arange(1, int(n) + 1)
    probs = ((k - 0.5) / n) ** 2
    return CalibrationData(probs, _bernoulli(draw, probs))


def expected_curve(gt):
    """
    Noiseless curve: every result replaced by its expectation.

    Expected binned means are averages of expectations, and sigma uses the
    Bernoulli form with those exact means.
    """
    ds = gt.dataset
    return cumulative_curve(ds.with_results(gt.probs), binary=True,
                            weighted=ds.has_varying_weights)


def expected_calib_curve(truth):
    """Calibration curve with outcomes replaced by their true probabilities."""
    data = truth.data
    n = data.n
    f = np.cumsum(truth.probs) / n
    ft = np.cumsum(data.probs) / n
    sigma = np.sqrt(np.sum(data.probs * (1 - data.probs))) / n
    return CumulativeCurve(np.arange(1, n + 1) / n, f - ft, data.probs, sigma)
