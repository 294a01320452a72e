"""
Monte Carlo experiments against the closed-form bounds.

For every sample size n and trial t, n points are drawn from stream t of the
master seed.  Each trial records the squared error of the Monte Carlo
approximant (1/n) sum lambda(x_i) K(., x_i) and of the orthogonal projection
onto the same sections.  Trials depend only on (seed, n, t), so the output
does not depend on the order in which they are evaluated.
"""
from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .bounds import BoundReport, expected_sq_error, thmbound_rhs
from .config import ExperimentConfig
from .elements import KernelCombination, NumericalQualityWarning, evaluate, expand_residual, residual_norm_sq
from .gram import factorize, gram, monotone_error_curve, projection_error_sq

__all__ = [
    "ORDERING_TOL",
    "TrialRecord",
    "SummaryRow",
    "RunResult",
    "PrefixResult",
    "run_trials",
    "prefix_convergence",
    "emit_report",
    "read_report",
    "CSV_COLUMNS",
]

ORDERING_TOL = 1e-10


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    n: int
    delta: float
    residual_sq: float
    projection_error_sq: float
    exceeded_mc: bool
    exceeded_proj: bool


@dataclass(frozen=True)
class SummaryRow:
    experiment_id: str
    n: int
    delta: float
    trials: int
    freq_mc_exceed: float
    freq_proj_exceed: float
    bound_term_bias: float
    bound_term_variance: float
    bound_total: float
    mean_residual_sq: float
    predicted_mean_residual_sq: float
    binom_stderr: float
    seed: int


CSV_COLUMNS = tuple(f.name for f in fields(SummaryRow))
_INT_COLUMNS = {"n", "trials", "seed"}


@dataclass
class RunResult:
    records: list
    summary: list
    residual_stderr: dict
    bounds: dict
    warnings: list = field(default_factory=list)
    ordering_violations: int = 0

    @property
    def failed(self) -> bool:
        return self.ordering_violations > 0


def _trial(cfg: ExperimentConfig, f_norm_sq: float, n: int, t: int):
    K = cfg.kernel
    x = cfg.measure.sample(n, cfg.seed, stream=t)
    residual = proj = math.nan
    if cfg.mode == "mc-weights":
        combo = KernelCombination(K, x, np.asarray(cfg.lam(x), dtype=complex) / n)
        return residual_norm_sq(cfg.target, combo, f_norm_sq), proj
    G = gram(K, x)
    v = evaluate(cfg.target, x)
    if cfg.mode == "both":
        # one Gram matrix serves both errors: ||sum w_i K_{x_i}||^2 = sum_ik w_i G_ik conj(w_k)
        w = np.asarray(cfg.lam(x), dtype=complex) / n
        residual = expand_residual(f_norm_sq, np.vdot(w, v).real, np.vdot(w, G.T @ w).real)
    proj = projection_error_sq(cfg.target, factorize(G), v, f_norm_sq)
    return residual, proj


def run_trials(cfg: ExperimentConfig) -> RunResult:
    """Run every (n, trial) pair and summarize each (n, delta) cell."""
    f_norm_sq = cfg.target.norm_sq()
    ctx = cfg.context
    closed_form = cfg.lam is not None and ctx.family is not None
    records, summary, caught = [], [], []
    residual_stderr, bounds = {}, {}
    violations = 0

    for n in cfg.ns:
        res = np.empty(cfg.trials)
        prj = np.empty(cfg.trials)
        with warnings.catch_warnings(record=True) as wlist:
            warnings.simplefilter("always", NumericalQualityWarning)
            for t in range(cfg.trials):
                res[t], prj[t] = _trial(cfg, f_norm_sq, n, t)
        caught.extend(f"n={n}: {w.message}" for w in wlist if issubclass(w.category, NumericalQualityWarning))
        if cfg.mode == "both":
            bad = prj > res + ORDERING_TOL
            violations += int(bad.sum())
            if bad.any():
                caught.append(f"n={n}: projection error exceeded Monte Carlo error in {int(bad.sum())} trials")

        mean_res = float(res.mean())
        residual_stderr[n] = float(res.std(ddof=1) / math.sqrt(cfg.trials)) if cfg.trials > 1 else math.nan
        predicted = expected_sq_error(ctx, cfg.target, cfg.lam, n) if closed_form else math.nan

        for delta in cfg.deltas:
            exc_mc = np.sqrt(res) >= delta
            exc_pj = np.sqrt(prj) >= delta
            for t in range(cfg.trials):
                records.append(
                    TrialRecord(t, n, delta, float(res[t]), float(prj[t]), bool(exc_mc[t]), bool(exc_pj[t]))
                )
            if closed_form:
                rep = thmbound_rhs(ctx, cfg.target, cfg.lam, n, delta)
            else:
                rep = BoundReport(math.nan, math.nan, n, delta)
            bounds[(n, delta)] = rep
            b = rep.total
            summary.append(
                SummaryRow(
                    experiment_id=cfg.experiment_id,
                    n=int(n),
                    delta=float(delta),
                    trials=cfg.trials,
                    freq_mc_exceed=float(exc_mc.mean()) if not math.isnan(mean_res) else math.nan,
                    freq_proj_exceed=float(exc_pj.mean()) if cfg.mode != "mc-weights" else math.nan,
                    bound_term_bias=rep.term_bias,
                    bound_term_variance=rep.term_variance,
                    bound_total=b,
                    mean_residual_sq=mean_res,
                    predicted_mean_residual_sq=predicted,
                    binom_stderr=math.sqrt(b * (1 - b) / cfg.trials) if closed_form else math.nan,
                    seed=cfg.seed,
                )
            )
    return RunResult(records, summary, residual_stderr, bounds, caught, violations)


@dataclass
class PrefixResult:
    curves: np.ndarray  # (seeds, max_N)
    threshold: float

    @property
    def median_curve(self):
        return np.median(self.curves, axis=0)

    @property
    def fraction_converged(self) -> float:
        return float(np.mean(self.curves[:, -1] < self.threshold))

    def monotone(self, slack: float) -> bool:
        return bool(np.all(np.diff(self.curves, axis=1) <= slack))


def prefix_convergence(cfg: ExperimentConfig, max_N: int, seeds: int, threshold: float = 1e-6, prepend=None) -> PrefixResult:
    """Error curves of f over one growing i.i.d. sequence per seed.

    Seed s draws its sequence from stream s of the master seed.  ``prepend``
    points, if given, are placed in front of every sequence.
    """
    if max_N < 2:
        raise ValueError("max_N must be at least 2")
    K = cfg.kernel
    head = K.validate([] if prepend is None else prepend)
    curves = []
    for s in range(seeds):
        x = np.concatenate([head, cfg.measure.sample(max_N - len(head), cfg.seed, stream=s)]) if max_N > len(head) else head[:max_N]
        curves.append(monotone_error_curve(cfg.target, x))
    return PrefixResult(np.array(curves), threshold)


def _fmt(value):
    if isinstance(value, float):
        return "nan" if math.isnan(value) else repr(value)
    return str(value)


def _rows(summary):
    return [asdict(r) if isinstance(r, SummaryRow) else dict(r) for r in summary]


def emit_report(summary, path=None, fmt: str = "csv") -> str:
    """Write summary rows as CSV or JSON; returns the text written.

    ``path=None`` only renders the text.
    """
    rows = _rows(summary)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in CSV_COLUMNS])
        text = buf.getvalue()
    elif fmt == "json":
        clean = [{c: (None if isinstance(r[c], float) and math.isnan(r[c]) else r[c]) for c in CSV_COLUMNS} for r in rows]
        text = json.dumps({"columns": list(CSV_COLUMNS), "rows": clean}, indent=2) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def read_report(path, fmt: str = "csv") -> list:
    """Parse a report written by :func:`emit_report` back into row dicts."""
    with open(path, encoding="utf-8") as fh:
        if fmt == "json":
            rows = json.load(fh)["rows"]
            return [{k: (math.nan if v is None else v) for k, v in r.items()} for r in rows]
        out = []
        for r in csv.DictReader(fh):
            out.append({k: (v if k == "experiment_id" else int(v) if k in _INT_COLUMNS else float(v)) for k, v in r.items()})
        return out
