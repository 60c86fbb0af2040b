"""Command-line front end.

Every subcommand writes a numeric table (CSV or JSON) to --out or stdout and
echoes its seed and settings on one stderr line. Exit codes: 0 success,
1 runtime error, 2 statistical failure (verify), 64 usage error.
"""

import argparse
import json
import sys

import numpy as np

from gueflux import field, gue, harness, limit, moments
from gueflux.semicircle import build_partition

EXIT_OK, EXIT_RUNTIME, EXIT_STAT, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    return "%.17g" % v


def write_table(columns, rows, fmt, out):
    if fmt == "csv":
        text = ",".join(columns) + "\n" + "".join(",".join(_fmt(v) for v in r) + "\n" for r in rows)
    else:
        recs = [{c: (int(v) if isinstance(v, (int, np.integer)) else None if v is None else float(v))
                 for c, v in zip(columns, r)} for r in rows]
        text = json.dumps({"columns": list(columns), "rows": recs}, sort_keys=True, indent=2, allow_nan=False) + "\n"
    _emit(text, out)


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _echo(cmd, **kw):
    items = " ".join(f"{k}={v}" for k, v in kw.items() if v is not None)
    print(f"gueflux {cmd} {items}", file=sys.stderr)


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _spectra(args):
    return gue.sample_many(args.n, args.seed, args.replicas, args.sampler)


def _spectrum_rows(lam):
    return [(r, j + 1, v) for r, row in enumerate(lam) for j, v in enumerate(row)]


def _dump_spectra(path, lam):
    write_table(("replica", "j", "lambda_j"), _spectrum_rows(lam), "csv", path)


def cmd_partition(args):
    _need(args, "n")
    p = build_partition(args.n)
    rows = [(0, p.gamma[0], None, None)]
    rows += [(j, p.gamma[j], p.cell_mean[j - 1], p.cell_density[j - 1]) for j in range(1, args.n + 1)]
    write_table(("j", "gamma_j", "cell_mean_j", "cell_density_j"), rows, args.format, args.out)


def cmd_sample(args):
    _need(args, "n", "seed")
    write_table(("replica", "j", "lambda_j"), _spectrum_rows(_spectra(args)), args.format, args.out)


def cmd_field(args):
    _need(args, "n", "seed")
    spec = gue.sample(args.n, args.seed, args.replica, args.sampler)
    p = build_partition(args.n)
    vals = field.build_field(spec, p, args.weighting).values
    rows = [(j, p.gamma[j], vals[j - 1]) for j in range(1, args.n + 1)]
    write_table(("j", "gamma_j", "value_j"), rows, args.format, args.out)


def cmd_coeffs(args):
    _need(args, "n", "seed")
    lam = _spectra(args)
    if args.kind == "fluctuation":
        s = field.batch_field_coeffs(lam, build_partition(args.n), args.kmax, args.weighting)
    else:
        s = field.counting_coeffs(lam, args.kmax, method=args.centering)
    if args.dump_spectra:
        _dump_spectra(args.dump_spectra, lam)
    rows = [(r, k, s[r, k]) for r in range(s.shape[0]) for k in range(s.shape[1])]
    write_table(("replica", "k", "s_k"), rows, args.format, args.out)


def cmd_limit(args):
    _need(args, "seed")
    s = limit.sample_limit_batch(args.kmax, args.seed, args.replicas)
    rows = [(r, k, s[r, k]) for r in range(s.shape[0]) for k in range(s.shape[1])]
    write_table(("replica", "k", "s_k"), rows, args.format, args.out)


def cmd_moments(args):
    _need(args, "n")
    tab = moments.harer_zagier(args.jmax, args.n)
    write_table(("j", "b_j", "power_trace"), tab.rows(), args.format, args.out)


VERIFY_KEYS = ("n", "replicas", "kmax", "sampler", "seed", "alpha", "threads")


def cmd_verify(args):
    _need(args, "seed")
    conf = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            conf = json.load(fh)
        if not isinstance(conf, dict):
            raise UsageError("config file must hold a JSON object")
    for key in VERIFY_KEYS:
        v = getattr(args, key)
        if v is not None:
            conf[key] = v
    try:
        cfg = harness.ExperimentConfig.from_dict(conf)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    summary, suites = harness.verify(cfg)
    if args.dump_spectra:
        _dump_spectra(args.dump_spectra, gue.sample_many(cfg.n, cfg.seed, cfg.replicas, cfg.sampler))
    _emit(summary.to_json(suites), args.out)
    failed = sorted(k for k, v in suites.items() if not v["pass"])
    if failed:
        print("failed suites: " + ", ".join(failed), file=sys.stderr)
        return EXIT_STAT
    return EXIT_OK


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, help="matrix size N")
    common.add_argument("--replicas", type=int, help="number of Monte Carlo replicas M")
    common.add_argument("--kmax", type=int, help="highest coefficient index K")
    common.add_argument("--seed", type=int, help="master seed (replica r uses the stream keyed by (seed, r))")
    common.add_argument("--sampler", choices=gue.SAMPLERS, help="eigenvalue sampler")
    common.add_argument("--alpha", type=float, help="Sobolev exponent for norm diagnostics")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, help="worker processes for the harness")

    parser = _Parser(prog="gueflux", description="GUE eigenvalue fluctuation fields and their log-correlated limit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("partition", parents=[common],
                       help="classical locations of the semicircle law",
                       description="Classical locations gamma_j = G^{-1}(j/N), j = 0..N, with the cell barycenters "
                                   "N * int y sigma(y) dy over (gamma_{j-1}, gamma_j] and sigma(gamma_j).")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("sample", parents=[common], help="sorted eigenvalues of H / sqrt(2N)",
                       description="Sorted eigenvalues lambda_1 <= ... <= lambda_N of H / sqrt(2N), H drawn with "
                                   "density proportional to exp(-Tr H^2). One row per (replica, j).")
    p.set_defaults(func=cmd_sample)

    weighting = dict(choices=("density", "cell_width"), default="density",
                     help="gap normalization: N sigma(gamma_j) (default) or the inverse cell width")

    p = sub.add_parser("field", parents=[common], help="fluctuation field X_N of one spectrum",
                       description="Levels of the piecewise-constant field X_N = N sigma(gamma_j) (lambda_j - "
                                   "cell_mean_j) on the cells (gamma_{j-1}, gamma_j] for one replica.")
    p.add_argument("--replica", type=int, default=0)
    p.add_argument("--weighting", **weighting)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("coeffs", parents=[common], help="Fourier-Chebyshev coefficients s_k per replica",
                       description="Coefficients s_k = (2/pi) int f U_k, k = 0..K, of the fluctuation field X_N or "
                                   "of the centered counting field sum_j (1(lambda_j < x) - P(lambda_j < x)), "
                                   "computed exactly from the piecewise-constant representation.")
    p.add_argument("--kind", choices=("fluctuation", "counting"), default="fluctuation")
    p.add_argument("--weighting", **weighting)
    p.add_argument("--centering", choices=("control_variate", "pooled"), default="control_variate",
                   help="estimator of the ensemble-mean counting function (counting kind only)")
    p.add_argument("--dump-spectra", metavar="PATH", help="also write the raw spectra as CSV (replica, j, lambda_j)")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("limit", parents=[common], help="coefficients of the limiting log-correlated field",
                       description="Coefficients s_k = Y_k / sqrt(k+1), k = 0..K, Y_k iid standard normal, of the "
                                   "field X = sum_k s_k U_k(x) sqrt(1 - x^2).")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("moments", parents=[common], help="exact finite-N moments from the Harer-Zagier recursion",
                       description="b_j from b_{j+1} = b_j + j(j+1)/(4N^2) b_{j-1} and the exact power traces "
                                   "E sum lambda^(2j) = N b_j 4^-j Cat_j.")
    p.add_argument("--jmax", type=int, default=4)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("verify", parents=[common], help="run the statistical verification suites",
                       description="Monte Carlo check that pi X_N approaches the log-correlated field: coefficient "
                                   "variances, correlations and normality, linear-statistic variances, kernel "
                                   "comparison, and (with a size ladder in --config) rigidity scaling. Writes a "
                                   "JSON summary (regardless of --format); exits 2 if any suite fails.")
    p.add_argument("--config", help="JSON experiment config; flags given on the command line win")
    p.add_argument("--dump-spectra", metavar="PATH", help="also write the raw spectra as CSV (replica, j, lambda_j)")
    p.set_defaults(func=cmd_verify)
    return parser


DEFAULTS = {"replicas": 1, "kmax": 16, "sampler": "tridiag"}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help exits 0, bad flags exit 64
        return exc.code
    if args.command != "verify":
        for k, v in DEFAULTS.items():
            if getattr(args, k) is None:
                setattr(args, k, v)
    shown = ("seed", "n", "replicas", "kmax", "sampler") + (() if args.command == "verify" else ("format",))
    _echo(args.command, **{k: getattr(args, k, None) for k in shown})
    try:
        for name in ("n", "replicas", "kmax", "threads"):
            v = getattr(args, name, None)
            if v is not None and v < (0 if name == "kmax" else 1):
                raise UsageError(f"--{name} out of range: {v}")
        code = args.func(args)
    except UsageError as exc:
        print(f"gueflux: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - report and exit nonzero
        print(f"gueflux: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
