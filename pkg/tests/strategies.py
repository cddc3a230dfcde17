"""Random small datasets for oracle and property tests."""

import numpy as np
from hypothesis import strategies as st

from cumdev.core import Dataset


def random_dataset(rng, max_m=50, max_n=10, weighted=None, binary=None):
    """Small random dataset with distinct scores and a nonempty subpopulation."""
    m = int(rng.integers(1, max_m + 1))
    scores = np.sort(rng.choice(10 * max_m, size=m, replace=False)) / 7.0
    scores = scores + rng.uniform(-3, 3)
    if binary is None:
        binary = bool(rng.integers(2))
    if binary:
        results = rng.integers(0, 2, size=m).astype(float)
    else:
        results = rng.normal(size=m)
    n = int(rng.integers(1, min(m, max_n) + 1))
    subpop = np.sort(rng.choice(m, size=n, replace=False))
    if weighted is None:
        weighted = bool(rng.integers(2))
    weights = rng.uniform(0.1, 5.0, size=m) if weighted else None
    return Dataset(scores, results, subpop, weights)


@st.composite
def datasets(draw, max_m=30, weighted=None, binary=None):
    raw = draw(st.lists(st.integers(-500, 500), min_size=1, max_size=max_m,
                        unique=True))
    scale = draw(st.sampled_from([1.0, 0.01, 13.5]))
    scores = np.sort(np.array(raw, dtype=float)) * scale
    m = scores.size
    if binary is None:
        binary = draw(st.booleans())
    if binary:
        results = draw(st.lists(st.sampled_from([0.0, 1.0]), min_size=m,
                                max_size=m))
    else:
        results = draw(st.lists(st.floats(-10, 10), min_size=m, max_size=m))
    subpop = draw(st.lists(st.integers(0, m - 1), min_size=1, max_size=m,
                           unique=True))
    if weighted is None:
        weighted = draw(st.booleans())
    weights = None
    if weighted:
        weights = draw(st.lists(st.floats(0.05, 20), min_size=m, max_size=m))
    return Dataset(scores, results, sorted(subpop), weights)
