"""Command line entry point: ``rkhs-sampling {run,bound,project,kp-table}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .bounds import expected_sq_error, thmbound_rhs
from .config import ConfigError, load_config, parse_points
from .elements import evaluate
from .gram import factorize, gram, projection_error_sq, projection_weights
from .harness import emit_report, prefix_convergence, run_trials
from .kernels import INTERVAL, DomainError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _global_flags(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=default, help="TOML experiment file")
    parser.add_argument("--seed", type=int, default=default, help="override the master seed (u64)")
    parser.add_argument("--out", default=default, help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default=default)


def build_parser():
    parser = argparse.ArgumentParser(prog="rkhs-sampling", description=__doc__)
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in [
        ("run", "run the Monte Carlo experiment and write the summary report"),
        ("bound", "print the closed-form bound for every (n, delta) cell"),
        ("project", "project the target onto the points listed under [project]"),
        ("kp-table", "tabulate K_P on the points listed under [kp_table]"),
    ]:
        _global_flags(sub.add_parser(name, help=text), suppress=True)
    return parser


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _table(columns, rows, fmt):
    if fmt == "json":
        return json.dumps({"columns": list(columns), "rows": [dict(zip(columns, r)) for r in rows]}, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _cmd_run(cfg):
    result = run_trials(cfg)
    text = emit_report(result.summary, cfg.output, cfg.fmt)
    if cfg.output is None:
        _write(text, None)
    if cfg.prefix:
        p = cfg.prefix
        pres = prefix_convergence(cfg, int(p.get("max_N", 200)), int(p.get("seeds", 50)), float(p.get("threshold", 1e-6)))
        rows = [(s, N + 1, float(v)) for s, curve in enumerate(pres.curves) for N, v in enumerate(curve)]
        text = _table(("seed", "N", "error_sq"), rows, "csv")
        if cfg.output:
            _write(text, f"{cfg.output}.prefix.csv")
        print(f"prefix: fraction below {pres.threshold:g} = {pres.fraction_converged:.3f}", file=sys.stderr)
    for msg in result.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    return EXIT_NUMERICAL if result.failed else EXIT_OK


_BOUND_FIELDS = ("n", "delta", "bound_term_bias", "bound_term_variance", "bound_total", "bound_uncapped")


def _cmd_bound(cfg):
    if cfg.lam is None or cfg.context.family is None:
        raise ConfigError("bounds need the Fourier or Hardy setting and a lambda")
    ctx = cfg.context
    rows = []
    for n in cfg.ns:
        mean = expected_sq_error(ctx, cfg.target, cfg.lam, n)
        for delta in cfg.deltas:
            rep = thmbound_rhs(ctx, cfg.target, cfg.lam, n, delta)
            d = rep.as_dict()
            rows.append((cfg.experiment_id, *(d[c] for c in _BOUND_FIELDS), mean))
    cols = ("experiment_id", *_BOUND_FIELDS, "predicted_mean_residual_sq")
    _write(_table(cols, rows, cfg.fmt), cfg.output)
    return EXIT_OK


def _split(z):
    z = complex(z)
    return z.real, z.imag


def _section_points(cfg, key):
    sec = cfg.extra.get(key)
    if not isinstance(sec, dict) or "points" not in sec:
        raise ConfigError(f"config needs a [{key}] section with 'points'")
    try:
        return parse_points(sec["points"], cfg.kernel.domain)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def _cmd_project(cfg):
    x = _section_points(cfg, "project")
    F = factorize(gram(cfg.kernel, x))
    v = evaluate(cfg.target, x)
    w = projection_weights(F, v)
    err = projection_error_sq(cfg.target, F, v)
    cols = ("index", "x_re", "x_im", "weight_re", "weight_im", "retained", "error_sq")
    kept = set(F.retained_pivots.tolist())
    rows = [(i, *_split(x[i]), *_split(w[i]), i in kept, err) for i in range(len(x))]
    _write(_table(cols, rows, cfg.fmt), cfg.output)
    return EXIT_OK


def _cmd_kp_table(cfg):
    sec = cfg.extra.get("kp_table", {})
    if "points" in sec:
        x = _section_points(cfg, "kp_table")
    else:
        m = int(sec.get("grid", 9))
        x = np.linspace(-np.pi, np.pi, m) if cfg.kernel.domain is INTERVAL else np.linspace(-0.9, 0.9, m).astype(complex)
    try:
        table = cfg.context.kp(x, x)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [(*_split(x[i]), *_split(x[j]), *_split(table[i, j])) for i in range(len(x)) for j in range(len(x))]
    _write(_table(("x_re", "x_im", "y_re", "y_im", "kp_re", "kp_im"), rows, cfg.fmt), cfg.output)
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "bound": _cmd_bound, "project": _cmd_project, "kp-table": _cmd_kp_table}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if not args.config:
            raise ConfigError("--config is required")
        cfg = load_config(args.config).with_overrides(seed=args.seed, output=args.out, fmt=args.format)
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        # e.g. a restricted kernel paired with a measure that samples outside the set
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
