"""
Command-line interface.

Exit status is 0 on success, 1 for usage errors and 2 for bad data. The
random seed comes from ``--seed``, else the ``CUMDEV_SEED`` environment
variable, else 0.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .binning import BinScheme, reliability_diagram
from .calibration import bootstrap_bands, calib_curve, calib_reliability, calib_stats
from .core import cumulative_curve, members_in_range, restrict_curve, summarize
from .errors import InvalidInputError
from .io import load_calibration, load_dataset, write_calibration, write_dataset
from .plot import PlotSpec, render_cumulative, render_reliability
from .screen import DEFAULT_THRESHOLD, screen_manifest
from .synth import CALIBRATION_KINDS, GENERATORS, gen_calibration, gen_null

USAGE_ERROR = 1
DATA_ERROR = 2
_SWITCH = {"auto": None, "on": True, "off": False}
SYNTH_CHOICES = (sorted(GENERATORS)
                 + [f"calibration-{k}" for k in CALIBRATION_KINDS] + ["null"])


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _common():
    # accepted before or after the subcommand; SUPPRESS keeps the later one
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                   help="random seed (default: $CUMDEV_SEED or 0)")
    p.add_argument("--weighted", choices=_SWITCH, default=argparse.SUPPRESS,
                   help="use the weighted formulas (default: auto)")
    p.add_argument("--binary", choices=_SWITCH, default=argparse.SUPPRESS,
                   help="Bernoulli variance for sigma (default: auto)")
    return p


def _zoom(text):
    lo, sep, hi = text.partition(":")
    try:
        bounds = float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    if not sep or not bounds[0] < bounds[1]:
        raise argparse.ArgumentTypeError(f"expected LO:HI with LO < HI, "
                                         f"got {text!r}")
    return bounds


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonnegative(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser():
    common = _common()
    parser = _Parser(prog="cumdev", parents=[common],
                     description="Cumulative-difference analysis of "
                                 "subpopulation deviations and calibration.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND",
                                parser_class=_Parser)
    sub.required = True

    def command(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text,
                              description=help_text)

    def subpop_filter(p):
        p.add_argument("--subpop-where", metavar="COL=VALUE",
                       help="members are rows whose COL equals VALUE "
                            "(default: the 'subpop' column)")

    p = command("stats", "print G, D, sigma and their ratios")
    p.add_argument("csv")
    subpop_filter(p)

    p = command("plot", "plot the cumulative differences as SVG")
    p.add_argument("csv")
    p.add_argument("-o", "--output", required=True, help="SVG path or -")
    p.add_argument("--zoom", type=_zoom, metavar="LO:HI",
                   help="restrict to subpopulation scores in [LO, HI]")
    p.add_argument("--title")
    subpop_filter(p)

    p = command("reliability", "plot a binned reliability diagram as SVG")
    p.add_argument("csv")
    p.add_argument("--scheme", default="equal-count",
                   choices=["equispaced", "equal-count", "equal-norm"])
    p.add_argument("--bins", type=_positive, default=10)
    p.add_argument("--full-bins", type=_positive,
                   help="bins for the full population (default: --bins)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--title")
    subpop_filter(p)

    p = command("calibrate", "assess calibration of predicted probabilities")
    p.add_argument("csv", help="columns score (probability) and result")
    p.add_argument("--bootstrap", type=_nonnegative, default=20,
                   metavar="REPS", help="bootstrap replicates (default 20)")
    p.add_argument("--scheme", default="equal-count",
                   choices=["equispaced", "equal-count"])
    p.add_argument("--bins", type=_positive, default=10)
    p.add_argument("-o", "--output", required=True,
                   help="reliability diagram SVG")
    p.add_argument("--cumulative", metavar="SVG",
                   help="also plot the cumulative differences here")

    p = command("synth", "write a synthetic dataset as CSV")
    p.add_argument("generator", choices=SYNTH_CHOICES)
    p.add_argument("-n", type=_positive, default=1000,
                   help="sample size for calibration and null data")
    p.add_argument("-o", "--output", required=True)

    p = command("screen", "rank the datasets listed in a manifest")
    p.add_argument("manifest", help="text file, one CSV path per line")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD,
                   help="flag rows with D/sigma above this (default 1.25)")
    subpop_filter(p)
    return parser


def _seed(args):
    if hasattr(args, "seed"):
        return args.seed
    env = os.environ.get("CUMDEV_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"CUMDEV_SEED must be an integer, got {env!r}")


def _switch(args, name):
    return _SWITCH[getattr(args, name, "auto")]


def _fmt(value):
    return "undefined" if value is None else format(value, ".6g")


def _stats_lines(stats):
    table = [("G", stats.g), ("D", stats.d), ("sigma", stats.sigma),
             ("G/sigma", stats.g_normalized),
             ("D/sigma", stats.d_normalized)]
    lines = [f"{name:<8} {_fmt(v)}" for name, v in table]
    lines.append(f"{'n':<8} {stats.n}")
    keys = [("g", stats.g), ("d", stats.d), ("sigma", stats.sigma),
            ("g_normalized", stats.g_normalized),
            ("d_normalized", stats.d_normalized)]
    lines += [f"{k}={'undefined' if v is None else repr(float(v))}"
              for k, v in keys]
    lines.append(f"n={stats.n}")
    return lines


def _emit(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _load(args):
    return load_dataset(args.csv, _seed(args), subpop_where=args.subpop_where)


def cmd_stats(args):
    ds = _load(args)
    curve = cumulative_curve(ds, weighted=_switch(args, "weighted"),
                             binary=_switch(args, "binary"))
    print("\n".join(_stats_lines(summarize(curve))))


def cmd_plot(args):
    ds = _load(args)
    options = dict(weighted=_switch(args, "weighted"),
                   binary=_switch(args, "binary"))
    if args.zoom:
        k_min, k_max = members_in_range(ds, *args.zoom)
        curve = restrict_curve(ds, k_max, k_min=k_min, **options)
    else:
        curve = cumulative_curve(ds, **options)
    _emit(args.output, render_cumulative(
        curve, PlotSpec(title=args.title, zoom=args.zoom)))


def cmd_reliability(args):
    ds = _load(args)
    seed = _seed(args)
    sub = BinScheme(args.scheme, args.bins, seed)
    full = BinScheme(args.scheme, args.full_bins or args.bins, seed)
    diag = reliability_diagram(ds, sub, full,
                               weighted=_switch(args, "weighted"))
    _emit(args.output, render_reliability(diag, spec=PlotSpec(
        title=args.title)))


def cmd_calibrate(args):
    seed = _seed(args)
    data = load_calibration(args.csv, seed)
    scheme = BinScheme(args.scheme, args.bins)
    bands = (bootstrap_bands(data, scheme, args.bootstrap, seed)
             if args.bootstrap else None)
    diag = calib_reliability(data, scheme)
    _emit(args.output, render_reliability(diag, bands, PlotSpec(
        title="calibration reliability diagram",
        xlabel="average predicted probability",
        ylabel="observed frequency")))
    curve = calib_curve(data)
    if args.cumulative:
        _emit(args.cumulative, render_cumulative(curve, PlotSpec(
            title="cumulative miscalibration", xlabel="predicted probability",
            ylabel="cumulative response minus prediction")))
    print("\n".join(_stats_lines(calib_stats(curve))))


def cmd_synth(args):
    seed = _seed(args)
    name = args.generator
    if name in GENERATORS:
        gt = GENERATORS[name](seed)
        write_dataset(args.output, gt.dataset, gt.probs)
    elif name == "null":
        data = gen_null(args.n, seed)
        write_calibration(args.output, data, data.probs)
    else:
        truth = gen_calibration(name[len("calibration-"):], args.n, seed)
        write_calibration(args.output, truth.data, truth.probs)


def cmd_screen(args):
    try:
        report = screen_manifest(args.manifest, _seed(args), args.threshold,
                                 subpop_where=args.subpop_where,
                                 weighted=_switch(args, "weighted"),
                                 binary=_switch(args, "binary"))
    except OSError as exc:
        raise InvalidInputError(f"cannot read manifest: {exc.strerror}")
    print(f"{'dataset':<40} {'n':>7} {'G/sigma':>10} {'D/sigma':>10}  flag")
    for row in report.rows:
        st = row.stats
        print(f"{row.name:<40} {st.n:>7} {_fmt(st.g_normalized):>10} "
              f"{_fmt(st.d_normalized):>10}  {'*' if row.flagged else ''}")
    for name, message in report.failures:
        print(f"FAILED {name}: {message}")
    return DATA_ERROR if report.failures else 0


COMMANDS = {
    "stats": cmd_stats,
    "plot": cmd_plot,
    "reliability": cmd_reliability,
    "calibrate": cmd_calibrate,
    "synth": cmd_synth,
    "screen": cmd_screen,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args) or 0
    except UsageError as exc:
        print(f"cumdev: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (InvalidInputError, OSError) as exc:
        print(f"cumdev: error: {exc}", file=sys.stderr)
        return DATA_ERROR
