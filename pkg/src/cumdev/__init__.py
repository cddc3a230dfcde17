"""
Cumulative differences for detecting deviations of a subpopulation from the
full population, and for assessing calibration, without binning.

The main entry points are :func:`cumulative_curve` and :func:`summarize`;
reliability diagrams, synthetic data, SVG rendering and CSV ingestion live in
their own modules.
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    CumulativeCurve,
    CumulativeSums,
    Dataset,
    SummaryStats,
    binned_full_means,
    cumulative_curve,
    cumulative_sums,
    kolmogorov_smirnov,
    kuiper,
    members_in_range,
    midpoint_bins,
    restrict_curve,
    shifted_ordinates,
    sigma_scale,
    summarize,
)
from .errors import DataError, InvalidInputError  # noqa: E402

__all__ = [
    "CumulativeCurve",
    "CumulativeSums",
    "Dataset",
    "SummaryStats",
    "DataError",
    "InvalidInputError",
    "binned_full_means",
    "cumulative_curve",
    "cumulative_sums",
    "kolmogorov_smirnov",
    "kuiper",
    "members_in_range",
    "midpoint_bins",
    "restrict_curve",
    "shifted_ordinates",
    "sigma_scale",
    "summarize",
]
