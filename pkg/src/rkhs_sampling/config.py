"""
Experiment configuration, read from a TOML file.

A minimal file::

    experiment_id = "fourier-phi0"
    seed = 7
    trials = 2000
    ns = [25, 100, 400]
    deltas = [0.25, 0.5, 1.0]
    mode = "both"            # "mc-weights" | "projection" | "both"

    [kernel]
    kind = "fourier"         # or "szego", "sum", "scale", "normalize", ...
    rule = "geometric"
    ratio = 0.5
    M = 64

    [target]
    preset = "phi_k"         # or "monomial_n", "section", or a coeffs table
    k = 0

    [lambda]
    choice = "preimage"      # or "zero", or a coeffs table

Complex numbers may be written as numbers, ``[re, im]`` pairs or strings
such as ``"1+2j"``.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .elements import BasisElement, RkhsElement, section
from .embedding import EmbeddingContext
from .kernels import (
    DISK,
    INTERVAL,
    FourierSeriesKernel,
    Kernel,
    NormalizedKernel,
    PullbackKernel,
    RestrictedKernel,
    ScaledKernel,
    SumKernel,
    SzegoKernel,
)
from .measures import FourierCoeffs, HardyWeighted, LambdaSpec, Measure, UniformDisk, UniformInterval

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "load_config",
    "config_from_dict",
    "build_kernel",
    "build_measure",
    "parse_complex",
    "parse_points",
]

MODES = ("mc-weights", "projection", "both")
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    pass


def parse_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(f"complex pair must have two entries, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError as exc:
            raise ConfigError(f"bad complex literal {value!r}") from exc
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    raise ConfigError(f"expected a number, got {value!r}")


def _coeff_table(table) -> dict:
    if not isinstance(table, dict) or not table:
        raise ConfigError("coefficient table must be a nonempty mapping")
    try:
        return {int(k): parse_complex(v) for k, v in table.items()}
    except ValueError as exc:
        raise ConfigError(f"bad coefficient table: {exc}") from exc


def parse_points(values, domain) -> np.ndarray:
    if domain is INTERVAL:
        return INTERVAL.validate([float(v) for v in values])
    return DISK.validate([parse_complex(v) for v in values])


def _const_fn(c):
    def fn(x):
        return np.full(len(x), c, dtype=complex)

    return fn


def _pullback_map(d, domain):
    name = d.get("map", "negate")
    if name == "negate":
        return lambda x: -x
    if name == "rotate" and domain is DISK:
        rot = np.exp(1j * float(d.get("angle", 0.0)))
        return lambda x: rot * x
    if name == "dilate" and domain is DISK:
        c = float(d.get("factor", 0.5))
        if not 0 < c <= 1:
            raise ConfigError("dilate factor must lie in (0, 1]")
        return lambda x: c * x
    raise ConfigError(f"unknown pullback map {name!r} on {domain.name}")


def _restrict_predicate(d, domain):
    if domain is INTERVAL:
        lo, hi = (float(v) for v in d.get("interval", [-np.pi, np.pi]))
        return lambda x: (x >= lo) & (x <= hi)
    rmax = float(d.get("max_radius", 1.0))
    return lambda x: np.abs(x) <= rmax


_FOURIER_RULES = {
    "inverse_square": lambda j: 1.0 / (1.0 + j * j),
}


def build_kernel(d) -> Kernel:
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigError("kernel section needs a 'kind'")
    kind = d["kind"]
    try:
        if kind == "fourier":
            M = int(d.get("M", 64))
            rule = d.get("rule", "geometric")
            if rule == "geometric":
                return FourierSeriesKernel.geometric(float(d.get("ratio", 0.5)), M)
            if rule == "table":
                table = {k: v.real for k, v in _coeff_table(d.get("coeffs")).items()}
                M = max(abs(k) for k in table)
                return FourierSeriesKernel.from_rule(lambda j: table.get(j, 0.0), M)
            if rule in _FOURIER_RULES:
                return FourierSeriesKernel.from_rule(_FOURIER_RULES[rule], M)
            raise ConfigError(f"unknown Fourier coefficient rule {rule!r}")
        if kind == "szego":
            return SzegoKernel(int(d.get("M", d.get("truncation", 128))))
        if kind == "sum":
            return SumKernel(build_kernel(d["left"]), build_kernel(d["right"]))
        if kind == "scale":
            return ScaledKernel(_const_fn(parse_complex(d.get("factor", 1.0))), build_kernel(d["inner"]))
        if kind == "normalize":
            return NormalizedKernel(build_kernel(d["inner"]))
        if kind == "restrict":
            inner = build_kernel(d["inner"])
            return RestrictedKernel(inner, _restrict_predicate(d, inner.domain))
        if kind == "pullback":
            inner = build_kernel(d["inner"])
            return PullbackKernel(_pullback_map(d, inner.domain), inner)
    except KeyError as exc:
        raise ConfigError(f"kernel {kind!r} is missing key {exc}") from exc
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown kernel kind {kind!r}")


def build_measure(d, kernel: Kernel) -> Measure:
    name = (d or {}).get("kind") if isinstance(d, dict) else d
    if name is None:
        name = kernel.domain.name
    if name == "interval":
        m = UniformInterval()
    elif name == "disk":
        m = UniformDisk()
    else:
        raise ConfigError(f"unknown measure {name!r}")
    if m.domain is not kernel.domain:
        raise ConfigError(f"measure {name!r} does not match the kernel's domain {kernel.domain.name!r}")
    return m


def build_target(d, kernel: Kernel) -> RkhsElement:
    if not isinstance(d, dict):
        raise ConfigError("target must be a table")
    try:
        if "coeffs" in d:
            return BasisElement(kernel, _coeff_table(d["coeffs"]))
        preset = d.get("preset")
        if preset == "phi_k":
            return BasisElement(kernel, {int(d.get("k", 0)): 1.0})
        if preset == "monomial_n":
            return BasisElement(kernel, {int(d.get("n", 0)): 1.0})
        if preset == "section":
            return section(kernel, parse_points([d["x"]], kernel.domain))
    except ConfigError:
        raise
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad target: {exc}") from exc
    raise ConfigError(f"unknown target preset {d.get('preset')!r}")


def build_lambda(d, ctx: EmbeddingContext, target: RkhsElement) -> LambdaSpec | None:
    choice = d.get("choice", "preimage") if isinstance(d, dict) else (d or "preimage")
    if isinstance(d, dict) and "coeffs" in d:
        table = _coeff_table(d["coeffs"])
        if ctx.family == "fourier":
            return FourierCoeffs(table)
        if ctx.family == "hardy":
            return HardyWeighted(table)
        raise ConfigError("lambda tables need the Fourier or Hardy setting")
    if ctx.family is None:
        if choice == "zero":
            return None
        raise ConfigError("lambda choices other than 'zero' need the Fourier or Hardy setting")
    if choice == "zero":
        return FourierCoeffs({}) if ctx.family == "fourier" else HardyWeighted({})
    if choice == "preimage":
        if not isinstance(target, BasisElement):
            raise ConfigError("lambda = 'preimage' needs a coefficient-form target")
        return ctx.preimage(target)
    raise ConfigError(f"unknown lambda choice {choice!r}")


def _positive_list(raw, name, cast):
    if isinstance(raw, (int, float)):
        raw = [raw]
    if not isinstance(raw, list) or not raw:
        raise ConfigError(f"{name} must be a nonempty list")
    vals = tuple(cast(v) for v in raw)
    if any(not v > 0 for v in vals):
        raise ConfigError(f"{name} entries must be positive")
    return vals


@dataclass(frozen=True)
class ExperimentConfig:
    kernel: Kernel
    measure: Measure
    target: RkhsElement
    lam: LambdaSpec | None
    deltas: tuple
    ns: tuple
    trials: int
    seed: int
    experiment_id: str = "experiment"
    output: str | None = None
    fmt: str = "csv"
    mode: str = "both"
    prefix: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def context(self) -> EmbeddingContext:
        return EmbeddingContext(self.kernel, self.measure)

    def with_overrides(self, seed=None, output=None, fmt=None) -> "ExperimentConfig":
        changes = {}
        if seed is not None:
            changes["seed"] = _check_seed(seed)
        if output is not None:
            changes["output"] = output
        if fmt is not None:
            if fmt not in FORMATS:
                raise ConfigError(f"format must be one of {FORMATS}")
            changes["fmt"] = fmt
        return replace(self, **changes)


def _check_seed(seed):
    try:
        seed = int(seed)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"seed must be an integer, got {seed!r}") from exc
    if not 0 <= seed < 2**64:
        raise ConfigError("seed must be an unsigned 64-bit integer")
    return seed


def config_from_dict(d: dict) -> ExperimentConfig:
    if "kernel" not in d:
        raise ConfigError("config needs a [kernel] section")
    kernel = build_kernel(d["kernel"])
    measure = build_measure(d.get("measure"), kernel)
    target = build_target(d.get("target", {"preset": "phi_k", "k": 0}), kernel)
    ctx = EmbeddingContext(kernel, measure)
    lam = build_lambda(d.get("lambda", "preimage"), ctx, target)
    mode = d.get("mode", "both")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}")
    if lam is None and mode != "projection":
        raise ConfigError("Monte Carlo weights need a lambda; use mode = 'projection'")
    fmt = d.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    trials = int(d.get("trials", 1000))
    if trials < 1:
        raise ConfigError("trials must be at least 1")
    known = {"kernel", "measure", "target", "lambda", "deltas", "ns", "trials", "seed",
             "experiment_id", "output", "format", "mode", "prefix"}
    return ExperimentConfig(
        kernel=kernel,
        measure=measure,
        target=target,
        lam=lam,
        deltas=_positive_list(d.get("deltas", [0.5]), "deltas", float),
        ns=_positive_list(d.get("ns", [100]), "ns", int),
        trials=trials,
        seed=_check_seed(d.get("seed", 0)),
        experiment_id=str(d.get("experiment_id", "experiment")),
        output=d.get("output"),
        fmt=fmt,
        mode=mode,
        prefix=dict(d.get("prefix", {})),
        extra={k: v for k, v in d.items() if k not in known},
    )


def load_config(path) -> ExperimentConfig:
    try:
        with open(Path(path), "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return config_from_dict(raw)
