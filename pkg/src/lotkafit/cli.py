"""Command-line front end.

    lotkafit fit --method mle-powerlaw lotka.csv
    lotkafit sample --alpha 2.5 --count 1000 --seed 7 | lotkafit fit --method mle-powerlaw -
    lotkafit tables

Input is a ``x,count`` CSV given as a path, ``-`` for stdin, or ``lotka``
for the bundled chemistry table.  JSON is the default output; the
LOTKAFIT_FORMAT environment variable changes that default (``sample``
always defaults to CSV so it can be piped back in).

Exit codes: 0 success, 1 data or parameter error, 2 convergence failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from . import __version__
from .comparison import build_comparison_report, ks_statistic
from .data import (
    LOTKA_CHEMISTRY,
    FrequencyTable,
    load_frequency_table,
    sufficient_stats,
    to_curve,
    truncate_data,
    truncate_distribution,
)
from .distributions import CutoffParams, PowerLawParams, sample
from .errors import ConvergenceError, LotkaFitError, NotConvergedError
from .estimators import (
    Method,
    fit_constrained_nls,
    fit_constrained_ols,
    fit_mle_cutoff,
    fit_mle_fixed_beta,
    fit_mle_power_law,
    fit_nls,
    fit_ols_loglog,
    fit_table1,
)

COMMANDS = ("fit", "compare", "ks", "sample", "tables")
FORMATS = ("json", "text", "csv")
FORMAT_ENV = "LOTKAFIT_FORMAT"
BUNDLED = "lotka"

EXIT_OK, EXIT_DATA, EXIT_CONVERGENCE = 0, 1, 2

_CURVE_FITS = {
    Method.OLS_LOGLOG: fit_ols_loglog,
    Method.CONSTRAINED_OLS: fit_constrained_ols,
    Method.NLS: fit_nls,
    Method.CONSTRAINED_NLS: fit_constrained_nls,
}


class UsageError(LotkaFitError, ValueError):
    pass


@dataclass(frozen=True)
class CommandConfig:
    command: str
    input_path: Optional[str] = None
    output_format: Optional[str] = None  # None: command default
    method: str = Method.MLE_POWERLAW.value
    alpha: Optional[float] = None
    beta: float = 0.0
    count: Optional[int] = None
    seed: int = 0
    beta_probe: float = -1e-6
    truncate_at: Optional[int] = None
    truncate_mode: str = "distribution"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.output_format is not None and self.output_format not in FORMATS:
            raise UsageError(f"unknown format {self.output_format!r}")
        if self.truncate_mode not in ("distribution", "data"):
            raise UsageError(f"unknown truncate mode {self.truncate_mode!r}")
        if self.command in ("ks", "sample") and self.alpha is None:
            raise UsageError(f"{self.command} needs --alpha")
        if self.command == "sample" and self.count is None:
            raise UsageError("sample needs --count")
        if self.truncate_at is not None and self.command != "fit":
            raise UsageError("--truncate-at only applies to fit")

    def resolved_format(self, environ=None):
        if self.output_format is not None:
            return self.output_format
        if self.command == "sample":
            return "csv"
        env = (os.environ if environ is None else environ).get(FORMAT_ENV, "").strip().lower()
        if env:
            if env not in FORMATS:
                raise UsageError(f"{FORMAT_ENV}={env!r} is not one of {', '.join(FORMATS)}")
            return env
        return "json"


def _g7(v):
    return f"{v:.7g}"


def _read_input(config, stdin):
    """Return (table, raw bytes)."""
    path = config.input_path
    if path is None and config.command == "tables":
        path = BUNDLED
    if path is None or path == "-":
        raw = stdin.read()
    elif path == BUNDLED:
        raw = resources.files("lotkafit.datasets").joinpath(LOTKA_CHEMISTRY).read_bytes()
    else:
        try:
            with open(path, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return load_frequency_table(raw), raw


def _model_params(alpha, beta):
    return PowerLawParams(alpha) if beta == 0 else CutoffParams(alpha, beta)


def _fit(config, table):
    method = Method(config.method)
    if method in _CURVE_FITS:
        if config.truncate_at is None:
            curve = to_curve(table)
        elif config.truncate_mode == "distribution":
            curve = truncate_distribution(to_curve(table), config.truncate_at)
        else:
            curve = truncate_data(table, config.truncate_at)
        return _CURVE_FITS[method](curve)
    if config.truncate_at is not None:
        raise UsageError("truncation applies to the curve (least-squares) methods only")
    stats = sufficient_stats(table)
    if method is Method.MLE_POWERLAW:
        return fit_mle_power_law(stats)
    if method is Method.MLE_CUTOFF:
        return fit_mle_cutoff(stats)
    if config.beta == 0:
        raise UsageError("mle-fixed-beta needs --beta < 0")
    return fit_mle_fixed_beta(stats, config.beta)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _dict_text(d):
    width = max(len(k) for k in d)
    lines = []
    for k, v in d.items():
        v = _g7(v) if isinstance(v, float) else v
        lines.append(f"{k:<{width}}  {v}")
    return "\n".join(lines) + "\n"


def _render_dict(d, fmt):
    if fmt == "json":
        return json.dumps(d, indent=2) + "\n"
    if fmt == "text":
        return _dict_text(d)
    return _csv(list(d), [list(d.values())])


def _ks_dict(result, params):
    return {
        "alpha": params.alpha,
        "beta": params.beta,
        "d_statistic": result.d_statistic,
        "argmax_x": result.argmax_x,
        "critical_value_95": result.critical_value_95,
        "reject": result.reject,
        "conservative_threshold": result.conservative_threshold,
    }


def _report_csv(report):
    d = report.to_dict()
    cols = ["hypothesis", "alpha", "beta", "loglik", "lr_statistic", "ks_d", "ks_argmax_x"]
    return _csv(cols, [[h[c] for c in cols] for h in d["hypotheses"]])


def build_tables(table: FrequencyTable, raw: bytes):
    """Table 1 and Table 2 with provenance, as one JSON-ready dict."""
    curve, stats = to_curve(table), sufficient_stats(table)
    table1 = [f.as_dict() for f in fit_table1(curve, stats)]
    report = build_comparison_report(table)
    return {
        "provenance": {
            "library": "lotkafit",
            "version": __version__,
            "dataset_sha256": hashlib.sha256(raw).hexdigest(),
            "n": table.n,
            "rows": len(table),
            "x_max": table.x_max,
        },
        "table1": table1,
        "table2": report.to_dict(),
    }


def _tables_text(t):
    p = t["provenance"]
    lines = [
        f"lotkafit {p['version']}  dataset sha256 {p['dataset_sha256']}",
        f"n = {p['n']}, {p['rows']} rows, x_max = {p['x_max']}",
        "",
        "Table 1: power-law exponent by method (full curve)",
        f"{'method':<18}{'alpha':>12}{'b':>12}{'objective':>14}{'iters':>7}  converged",
    ]
    for f in t["table1"]:
        b = _g7(f["b"]) if "b" in f else ""
        lines.append(
            f"{f['method']:<18}{_g7(f['alpha']):>12}{b:>12}{_g7(f['objective']):>14}"
            f"{f['iterations']:>7}  {f['converged']}"
        )
    lines += ["", "Table 2: log-likelihood comparisons",
              f"{'hypothesis':<6}{'alpha':>12}{'beta':>14}{'loglik':>14}{'-2 ln lambda':>14}{'KS D':>12}"]
    for h in t["table2"]["hypotheses"]:
        lr = "" if h["lr_statistic"] is None else _g7(h["lr_statistic"])
        lines.append(
            f"{h['hypothesis']:<6}{_g7(h['alpha']):>12}{_g7(h['beta']):>14}{_g7(h['loglik']):>14}"
            f"{lr:>14}{_g7(h['ks_d']):>12}"
        )
    t2 = t["table2"]
    prox = t2["proximity_p0_p1"]
    lines += [
        "",
        f"chi^2(1) 0.99 critical value {_g7(t2['lr_critical_value_99'])}; "
        f"KS 0.95 critical value {_g7(t2['ks_critical_value_95'])} (conservative)",
        f"p_0 vs p_1: max |diff| {_g7(prox['max_abs_diff'])}, "
        f"ratio in [{_g7(prox['ratio_min'])}, {_g7(prox['ratio_max'])}]",
    ]
    return "\n".join(lines) + "\n"


def _tables_csv(t):
    rows = [["table1", f["method"], f["alpha"], f.get("b", ""), "", f["objective"]] for f in t["table1"]]
    rows += [["table2", h["hypothesis"], h["alpha"], "", h["beta"], h["loglik"]] for h in t["table2"]["hypotheses"]]
    return _csv(["table", "method", "alpha", "b", "beta", "objective_or_loglik"], rows)


def _execute(config, stdin, environ):
    fmt = config.resolved_format(environ)
    if config.command == "sample":
        params = _model_params(config.alpha, config.beta)
        table = sample(params, config.count, config.seed)
        if fmt == "csv":
            return table.to_csv()
        if fmt == "json":
            return json.dumps({"x": table.xs.tolist(), "count": table.counts.tolist()}) + "\n"
        return "".join(f"{x:>8} {c:>8}\n" for x, c in table.rows)

    table, raw = _read_input(config, stdin)
    if config.command == "fit":
        return _render_dict(_fit(config, table).as_dict(), fmt)
    if config.command == "ks":
        params = _model_params(config.alpha, config.beta)
        return _render_dict(_ks_dict(ks_statistic(table, params), params), fmt)
    if config.command == "compare":
        report = build_comparison_report(table, config.beta_probe)
        if fmt == "json":
            return report.to_json() + "\n"
        return report.to_text() if fmt == "text" else _report_csv(report)
    tables = build_tables(table, raw)
    if fmt == "json":
        return json.dumps(tables, indent=2) + "\n"
    return _tables_text(tables) if fmt == "text" else _tables_csv(tables)


def run(config: CommandConfig, stdin, stdout, stderr, environ=None) -> int:
    """Run one command on byte streams and return the exit code."""
    try:
        text = _execute(config, stdin, environ)
    except (ConvergenceError, NotConvergedError) as exc:
        stderr.write(f"lotkafit: convergence failure: {exc}\n".encode())
        return EXIT_CONVERGENCE
    except (LotkaFitError, ValueError) as exc:
        stderr.write(f"lotkafit: {exc}\n".encode())
        return EXIT_DATA
    stdout.write(text.encode())
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # bad flags are parameter errors (1); 2 is reserved for convergence
        self.print_usage(sys.stderr)
        self.exit(EXIT_DATA, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="lotkafit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, with_input=True):
        if with_input:
            p.add_argument("input_path", nargs="?", help="CSV path, '-' for stdin, or 'lotka'")
        p.add_argument("--format", dest="output_format", choices=FORMATS)

    p = sub.add_parser("fit", help="fit one estimator")
    common(p)
    p.add_argument("--method", default=Method.MLE_POWERLAW.value, choices=[m.value for m in Method])
    p.add_argument("--beta", type=float, default=0.0, help="fixed beta for mle-fixed-beta")
    p.add_argument("--truncate-at", type=int)
    p.add_argument("--truncate-mode", choices=("distribution", "data"), default="distribution")

    p = sub.add_parser("compare", help="likelihood-ratio and KS comparison")
    common(p)
    p.add_argument("--beta-probe", type=float, default=-1e-6)

    p = sub.add_parser("ks", help="KS distance to a given model")
    common(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)

    p = sub.add_parser("sample", help="draw a seeded synthetic frequency table")
    common(p, with_input=False)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("tables", help="both result tables with provenance")
    common(p)
    return parser


def main(argv=None):
    args = vars(build_parser().parse_args(argv))
    try:
        config = CommandConfig(**args)
    except UsageError as exc:
        sys.stderr.write(f"lotkafit: {exc}\n")
        return EXIT_DATA
    return run(config, sys.stdin.buffer, sys.stdout.buffer, sys.stderr.buffer)


if __name__ == "__main__":
    sys.exit(main())
