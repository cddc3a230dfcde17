import numpy as np
import pytest

import oracle
from strategies import random_dataset
from cumdev.core import Dataset
from cumdev.errors import InvalidInputError
from cumdev.io import write_dataset
from cumdev.screen import screen, screen_manifest


def test_empty():
    report = screen([])
    assert report.rows == () and report.failures == ()


def test_zero_deviation_unflagged():
    ds = Dataset([1.0, 2.0, 3.0], [0.5, 0.5, 0.5], [1])
    report = screen([("flat", ds)])
    (row,) = report.rows
    assert row.stats.g == row.stats.d == 0
    assert not row.flagged


def _kuiper_over_sigma(ds):
    s, r = ds.scores.tolist(), ds.results.tolist()
    idx = ds.subpop.tolist()
    f, ft, _ = oracle.cumulative(s, r, idx)
    sig = oracle.sigma(s, r, idx)
    if sig == 0:
        return None
    return oracle.kuiper([a - b for a, b in zip(f, ft)]) / sig


def _rank(pair):
    value = _kuiper_over_sigma(pair[1])
    return (value is None, -value if value is not None else 0.0)


def test_ordering_matches_oracle():
    rng = np.random.default_rng(12)
    named = [(f"d{i}", random_dataset(rng, weighted=False)) for i in range(8)]
    report = screen(named)
    expected = sorted(named, key=_rank)
    assert [r.name for r in report.rows] == [n for n, _ in expected]
    for row in report.rows:
        value = _kuiper_over_sigma(dict(named)[row.name])
        if value is None:
            assert row.stats.d_normalized is None and not row.flagged
            continue
        assert row.stats.d_normalized == pytest.approx(value, rel=1e-12)
        assert row.flagged == (value > 1.25)


def test_failures_reported_not_dropped():
    good = Dataset([1.0, 2.0], [0.0, 1.0], [1])
    zero_sigma = Dataset([1.0, 2.0], [0.0, 0.0], [1])

    def broken():
        raise InvalidInputError("boom")

    report = screen([("zero", zero_sigma), ("bad", broken), ("good", good)])
    assert [r.name for r in report.rows] == ["good", "zero"]
    assert report.failures == (("bad", "boom"),)


def test_threshold(tmp_path):
    ds = Dataset([1.0, 2.0, 3.0, 4.0], [0, 1, 0, 1], [1, 3])
    assert screen([("x", ds)], threshold=1.0).rows[0].flagged
    assert not screen([("x", ds)], threshold=2.0).rows[0].flagged


def test_manifest(tmp_path):
    rng = np.random.default_rng(5)
    (tmp_path / "sub").mkdir()
    names = []
    for i in range(3):
        name = f"sub/d{i}.csv"
        write_dataset(tmp_path / name, random_dataset(rng))
        names.append(name)
    manifest = tmp_path / "list.txt"
    manifest.write_text("# header comment\n" + "\n".join(names)
                        + "\n\nmissing.csv\n")
    report = screen_manifest(manifest)
    assert sorted(r.name for r in report.rows) == names
    assert [f[0] for f in report.failures] == ["missing.csv"]
