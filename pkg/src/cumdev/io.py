"""
Reading and writing datasets as CSV.

Input files are UTF-8 with a header row. Datasets need the columns ``score``
and ``result``; ``weight`` and ``subpop`` are optional and other columns are
ignored (but may select the subpopulation, see ``subpop_where``). Rows are
numbered as in a spreadsheet, the header being row 1.

Floats are written with ``repr``, which round-trips exactly.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from .calibration import CalibrationData
from .core import Dataset
from .errors import DataError, InvalidInputError

__all__ = [
    "TIE_SCALE",
    "perturb_ties",
    "load_dataset",
    "load_calibration",
    "write_dataset",
    "write_calibration",
]

TIE_SCALE = 1e-8
_TRUE = {"1", "true", "yes", "y", "t"}
_FALSE = {"0", "false", "no", "n", "f", ""}
_MAX_TRIES = 10


def _tied(sorted_scores):
    tie = np.zeros(sorted_scores.size, dtype=bool)
    same = sorted_scores[1:] == sorted_scores[:-1]
    tie[1:] |= same
    tie[:-1] |= same
    return tie


def perturb_ties(scores, rng, lo=-math.inf, hi=math.inf):
    """
    Break ties among ``scores`` by tiny random perturbations.

    Every score equal to another moves by a uniform random amount of at most
    ``1e-8 |s|`` (``1e-8`` when ``s == 0``); untied scores are left alone.
    Moves that would leave ``[lo, hi]`` go the other way instead. Draws are
    repeated (a handful of times at most) until all scores are distinct.

    Parameters
    ----------
    scores : array_like
    rng : numpy.random.Generator
    lo, hi : float, optional
        bounds the perturbed scores must respect

    Returns
    -------
    scores : ndarray
        perturbed copy, in the original (unsorted) order
    """
    out = np.array(scores, dtype=float)
    for _ in range(_MAX_TRIES):
        order = np.argsort(out, kind="stable")
        tie = np.zeros(out.size, dtype=bool)
        tie[order] = _tied(out[order])
        if not tie.any():
            return out
        s = out[tie]
        scale = np.where(s == 0, TIE_SCALE, TIE_SCALE * np.abs(s))
        step = rng.uniform(-1.0, 1.0, size=s.size) * scale
        moved = s + step
        flip = (moved < lo) | (moved > hi)
        moved[flip] = s[flip] - step[flip]
        out[tie] = moved
    raise DataError("could not break ties among the scores")


def _open_rows(path):
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    with handle:
        reader = csv.reader(handle)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError("missing header row", row=1) from None
        rows = list(reader)
    return header, rows


def _parse_float(cell, row, column):
    try:
        value = float(cell)
    except ValueError:
        raise DataError(f"not a number: {cell!r}", row, column) from None
    if not math.isfinite(value):
        raise DataError(f"not finite: {cell!r}", row, column)
    return value


def _parse_flag(cell, row, column):
    key = cell.strip().lower()
    if key in _TRUE:
        return True
    if key in _FALSE:
        return False
    raise DataError(f"not a boolean: {cell!r}", row, column)


def _read_table(path, required):
    """Rows as dicts keyed by column, with their 1-based file row numbers."""
    header, rows = _open_rows(path)
    for name in required:
        if name not in header:
            raise DataError(f"missing required column {name!r}", row=1)
    records = []
    for number, cells in enumerate(rows, start=2):
        if not any(c.strip() for c in cells):
            continue
        if len(cells) != len(header):
            raise DataError(f"expected {len(header)} cells, found "
                            f"{len(cells)}", row=number)
        records.append((number, dict(zip(header, cells))))
    return header, records


def _parse_where(where):
    column, sep, value = where.partition("=")
    if not sep or not column.strip():
        raise InvalidInputError(f"expected COLUMN=VALUE, got {where!r}")
    return column.strip(), value.strip()


def load_dataset(path, seed=0, *, subpop_where=None):
    """
    Read a dataset from CSV.

    Parameters
    ----------
    path : str or path-like
    seed : int
        seeds the perturbation that breaks tied scores
    subpop_where : str, optional
        ``"COLUMN=VALUE"``; members are the rows whose ``COLUMN`` equals
        ``VALUE`` (compared as stripped text). Without it the ``subpop``
        column, holding 1/0 or true/false, decides.

    Returns
    -------
    Dataset
        rows sorted by score, ties broken, rows of weight 0 dropped

    Raises
    ------
    DataError
        for missing columns, malformed or non-finite numbers, negative
        weights and an empty subpopulation, naming the row and column
    """
    where = _parse_where(subpop_where) if subpop_where else None
    header, records = _read_table(path, ("score", "result"))
    if where is None and "subpop" not in header:
        raise DataError("no 'subpop' column and no subpopulation filter",
                        row=1)
    if where is not None and where[0] not in header:
        raise DataError(f"missing column {where[0]!r} for the filter", row=1)
    has_weight = "weight" in header
    scores, results, weights, member = [], [], [], []
    for number, rec in records:
        score = _parse_float(rec["score"], number, "score")
        result = _parse_float(rec["result"], number, "result")
        weight = 1.0
        if has_weight:
            weight = _parse_float(rec["weight"], number, "weight")
            if weight < 0:
                raise DataError("negative weight", number, "weight")
            if weight == 0:
                continue
        if where is None:
            flag = _parse_flag(rec["subpop"], number, "subpop")
        else:
            flag = rec[where[0]].strip() == where[1]
        scores.append(score)
        results.append(result)
        weights.append(weight)
        member.append(flag)
    if not scores:
        raise DataError("no rows with positive weight")
    if not any(member):
        raise DataError("the subpopulation is empty")
    rng = np.random.default_rng(seed)
    scores = perturb_ties(scores, rng)
    order = np.argsort(scores, kind="stable")
    member = np.asarray(member)[order]
    return Dataset(scores[order], np.asarray(results)[order],
                   np.flatnonzero(member),
                   np.asarray(weights)[order] if has_weight else None)


def load_calibration(path, seed=0):
    """
    Read predicted probabilities (column ``score``) and binary outcomes
    (column ``result``) from CSV, sorted by probability with ties broken
    inside ``[0, 1]``.
    """
    _, records = _read_table(path, ("score", "result"))
    probs, outcomes = [], []
    for number, rec in records:
        p = _parse_float(rec["score"], number, "score")
        if not 0 <= p <= 1:
            raise DataError("probability outside [0, 1]", number, "score")
        r = _parse_float(rec["result"], number, "result")
        if r not in (0.0, 1.0):
            raise DataError("outcome must be 0 or 1", number, "result")
        probs.append(p)
        outcomes.append(r)
    if not probs:
        raise DataError("no data rows")
    probs = perturb_ties(probs, np.random.default_rng(seed), 0.0, 1.0)
    order = np.argsort(probs, kind="stable")
    return CalibrationData(probs[order], np.asarray(outcomes)[order])


def _write(path, header, columns):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow(row)


def _floats(values):
    return [repr(float(v)) for v in values]


def write_dataset(path, dataset, probs=None):
    """
    Write ``dataset`` as CSV with columns ``score,result[,weight],subpop``
    and, when given, the true success probabilities as ``prob``.
    """
    flags = np.zeros(dataset.m, dtype=int)
    flags[dataset.subpop] = 1
    header = ["score", "result"]
    columns = [_floats(dataset.scores), _floats(dataset.results)]
    if dataset.weights is not None:
        header.append("weight")
        columns.append(_floats(dataset.weights))
    header.append("subpop")
    columns.append(flags.tolist())
    if probs is not None:
        header.append("prob")
        columns.append(_floats(probs))
    _write(path, header, columns)


def write_calibration(path, data, probs=None):
    """Write calibration data as CSV: ``score,result[,prob]``."""
    header = ["score", "result"]
    columns = [_floats(data.probs), _floats(data.outcomes)]
    if probs is not None:
        header.append("prob")
        columns.append(_floats(probs))
    _write(path, header, columns)
