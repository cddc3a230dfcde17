"""
Batch screening: one summary statistic per dataset, largest first.

The screen is the cheap first pass over many (dataset, subpopulation) pairs;
pairs whose normalized Kuiper statistic stands out deserve a drill-down with
full plots.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .core import cumulative_curve, summarize
from .errors import InvalidInputError
from .io import load_dataset

__all__ = ["DEFAULT_THRESHOLD", "ScreenRow", "ScreenReport", "screen",
           "screen_manifest", "read_manifest"]

# about sqrt(pi / 2), the typical size of G / sigma without any deviation
DEFAULT_THRESHOLD = 1.25


@dataclass(frozen=True)
class ScreenRow:
    name: str
    stats: object
    flagged: bool


@dataclass(frozen=True)
class ScreenReport:
    """
    ``rows`` sorted by decreasing ``d_normalized`` (rows where it is
    undefined come last, in input order); ``failures`` pairs each input that
    could not be analysed with its error message.
    """

    rows: tuple
    failures: tuple
    threshold: float = DEFAULT_THRESHOLD

    @property
    def flagged(self):
        return tuple(r for r in self.rows if r.flagged)


def _sort_key(item):
    position, row = item
    dn = row.stats.d_normalized
    return (dn is None, -dn if dn is not None else 0.0, position)


def screen(sources, threshold=DEFAULT_THRESHOLD, *, weighted=None,
           binary=None):
    """
    Summarize every dataset and rank them.

    Parameters
    ----------
    sources : iterable of (str, Dataset or callable)
        named datasets; a callable is invoked to produce its dataset, so load
        errors are caught and reported like analysis errors
    threshold : float
        rows whose ``d_normalized`` exceeds it are flagged
    weighted, binary : bool, optional
        passed on to :func:`cumdev.core.cumulative_curve`

    Returns
    -------
    ScreenReport
        every input appears exactly once, as a row or as a failure
    """
    rows = []
    failures = []
    for position, (name, source) in enumerate(sources):
        try:
            dataset = source() if callable(source) else source
            stats = summarize(cumulative_curve(dataset, weighted=weighted,
                                               binary=binary))
        except InvalidInputError as exc:
            failures.append((name, str(exc)))
            continue
        dn = stats.d_normalized
        rows.append((position, ScreenRow(name, stats,
                                         dn is not None and dn > threshold)))
    rows.sort(key=_sort_key)
    return ScreenReport(tuple(r for _, r in rows), tuple(failures), threshold)


def read_manifest(path):
    """CSV paths listed one per line, resolved against the manifest's folder;
    blank lines and lines starting with ``#`` are skipped."""
    base = os.path.dirname(os.path.abspath(path))
    with open(path, encoding="utf-8") as handle:
        lines = [line.strip() for line in handle]
    return [(line, os.path.join(base, line)) for line in lines
            if line and not line.startswith("#")]


def screen_manifest(path, seed=0, threshold=DEFAULT_THRESHOLD, *,
                    subpop_where=None, weighted=None, binary=None):
    """Screen every dataset named in the manifest at ``path``."""
    sources = [(name, lambda full=full: load_dataset(
                    full, seed, subpop_where=subpop_where))
               for name, full in read_manifest(path)]
    return screen(sources, threshold, weighted=weighted, binary=binary)
