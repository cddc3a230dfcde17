"""
Calibration of predicted probabilities against observed binary outcomes.

The cumulative response minus the cumulative predicted probability, plotted
against ``k/n``, has secant slopes equal to the miscalibration over the
corresponding range of probabilities. Binned reliability diagrams (with
bootstrap replicates as error bars) are provided for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .binning import ReliabilityDiagram, bin_edges, binned_points
from .core import CumulativeCurve, _readonly, summarize
from .errors import InvalidInputError

__all__ = [
    "CalibrationData",
    "calib_curve",
    "calib_stats",
    "calib_reliability",
    "bootstrap_bands",
]


@dataclass(frozen=True, eq=False)
class CalibrationData:
    """
    Predicted probabilities ``probs`` in nondecreasing order, paired with
    binary ``outcomes``.

    Ties should be broken upstream (see :func:`cumdev.io.perturb_ties`) before
    plotting cumulative curves; bootstrap replicates keep their duplicates.
    """

    probs: np.ndarray
    outcomes: np.ndarray

    def __post_init__(self):
        probs = _readonly(self.probs)
        outcomes = _readonly(self.outcomes)
        if probs.ndim != 1 or probs.size == 0:
            raise InvalidInputError("probs must be a nonempty 1-D sequence")
        if outcomes.shape != probs.shape:
            raise InvalidInputError("probs and outcomes differ in length")
        if not np.all((probs >= 0) & (probs <= 1)):
            raise InvalidInputError("probabilities must lie in [0, 1]")
        if np.any(np.diff(probs) < 0):
            raise InvalidInputError("probabilities must be sorted")
        if not np.all((outcomes == 0) | (outcomes == 1)):
            raise InvalidInputError("outcomes must be 0 or 1")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "outcomes", outcomes)

    @property
    def n(self):
        return self.probs.size


def calib_curve(data):
    """
    Cumulative differences between observed outcomes and predicted
    probabilities.

    Parameters
    ----------
    data : CalibrationData

    Returns
    -------
    CumulativeCurve
        ordinates ``(1/n) sum_{j<=k} (R_j - S_j)`` (accumulated separately),
        abscissae ``k/n``, and ``sigma = sqrt(sum S(1-S)) / n``, the standard
        deviation of the final ordinate under perfect calibration
    """
    n = data.n
    f = np.cumsum(data.outcomes) / n
    ft = np.cumsum(data.probs) / n
    sigma = np.sqrt(np.sum(data.probs * (1 - data.probs))) / n
    return CumulativeCurve(np.arange(1, n + 1) / n, f - ft, data.probs, sigma)


def calib_stats(curve):
    """Kolmogorov-Smirnov and Kuiper statistics of a calibration curve."""
    return summarize(curve)


def _reliability(probs, outcomes, scheme):
    edges = bin_edges(scheme, probs)
    points, mass = binned_points(probs, outcomes, edges)
    return ReliabilityDiagram(points, np.empty((0, 2)), edges, [], mass, [],
                              reference="diagonal")


def calib_reliability(data, scheme):
    """
    Reliability diagram of empirical success frequency against mean
    predicted probability, per bin; the reference is the diagonal ``y = x``.
    """
    return _reliability(data.probs, data.outcomes, scheme)


def bootstrap_bands(data, scheme, reps=20, seed=0):
    """
    Reliability diagrams of bootstrap resamples, for use as error bars.

    Each replicate draws ``n`` pairs uniformly with replacement, restores the
    order of increasing probability (duplicates stay in order of original
    index) and bins them with ``scheme``. Replicate ``r`` uses the ``r``th
    child of ``numpy.random.SeedSequence(seed)``, so any single replicate can
    be reproduced on its own.

    Parameters
    ----------
    data : CalibrationData
    scheme : BinScheme
    reps : int, optional
        number of replicates; 20 gives roughly 95% coverage by eye
    seed : int, optional

    Returns
    -------
    list of ReliabilityDiagram
    """
    if int(reps) != reps or reps < 1:
        raise InvalidInputError("reps must be a positive integer")
    n = data.n
    out = []
    for child in np.random.SeedSequence(seed).spawn(int(reps)):
        picks = np.sort(np.random.default_rng(child).integers(0, n, size=n))
        out.append(_reliability(data.probs[picks], data.outcomes[picks],
                                scheme))
    return out
