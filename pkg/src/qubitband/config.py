"""Experiment configuration files: flat key-value text with section headers.

Recognized sections and keys:

    [qubit]             f, kappa
    [plan.sinc]         f_low, bandwidth, m, n
    [plan.interleaved]  f_low, bandwidth, m, n, k (optional; defaults to the
                        offset with the best kernel margin)
    [sweep]             axis (n or m), values (comma-separated integers)
    [run]               reps, base_seed, band_low, band_high, oversample,
                        zero_pad (all optional)

Example:

    [qubit]
    f = 1.0
    kappa = 0.02

    [plan.interleaved]
    f_low = 0.8
    bandwidth = 0.4
    m = 160
    n = 100

Validation failures raise ConfigError naming the offending [section] key.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass
from pathlib import Path

from .dynamics import QubitParams
from .kernels import default_offset
from .measurement import SamplingPlan, Scheme, build_interleaved_schedule, build_sinc_schedule


class ConfigError(ValueError):
    """Raised for unreadable, incomplete or inconsistent configuration."""


@dataclass(frozen=True)
class PlanSpec:
    """Declarative description of one sampling plan."""

    scheme: Scheme
    f_low: float
    bandwidth: float
    m: int
    n: int
    k: float | None = None

    def build(self) -> SamplingPlan:
        if self.scheme is Scheme.SINC:
            return build_sinc_schedule(self.f_low, self.bandwidth, self.m, self.n)
        k = self.k if self.k is not None else default_offset(self.f_low, self.bandwidth)
        return build_interleaved_schedule(self.f_low, self.bandwidth, k, self.m, self.n)

    def replace(self, **changes) -> "PlanSpec":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully parsed experiment description."""

    qubit: QubitParams
    sinc: PlanSpec | None = None
    interleaved: PlanSpec | None = None
    reps: int | None = None
    base_seed: int = 0
    band: tuple[float, float] | None = None
    oversample: int = 16
    zero_pad: int = 4
    sweep_axis: str | None = None
    sweep_values: tuple[int, ...] | None = None

    def plan_specs(self) -> dict[str, PlanSpec]:
        out = {}
        if self.sinc is not None:
            out["sinc"] = self.sinc
        if self.interleaved is not None:
            out["interleaved"] = self.interleaved
        return out

    def fit_band(self, spec: PlanSpec) -> tuple[float, float]:
        """Configured fit band, defaulting to the plan's own band."""
        if self.band is not None:
            return self.band
        return (spec.f_low, spec.f_low + spec.bandwidth)


def _get(parser: configparser.ConfigParser, section: str, key: str, cast, default=None):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key)
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r} ({exc})") from None


def _require(parser: configparser.ConfigParser, section: str, key: str, cast):
    if not parser.has_option(section, key):
        raise ConfigError(f"[{section}] {key}: required key is missing")
    return _get(parser, section, key, cast)


def _parse_plan(parser: configparser.ConfigParser, section: str, scheme: Scheme) -> PlanSpec:
    spec = PlanSpec(
        scheme=scheme,
        f_low=_require(parser, section, "f_low", float),
        bandwidth=_require(parser, section, "bandwidth", float),
        m=_require(parser, section, "m", int),
        n=_require(parser, section, "n", int),
        k=_get(parser, section, "k", float),
    )
    try:
        spec.build()
    except ValueError as exc:
        raise ConfigError(f"[{section}]: {exc}") from exc
    return spec


def parse_config(path: str | Path) -> ExperimentConfig:
    """Read and validate an experiment configuration file."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    known = {"qubit", "plan.sinc", "plan.interleaved", "sweep", "run"}
    for section in parser.sections():
        if section not in known:
            raise ConfigError(f"[{section}]: unknown section (expected one of {sorted(known)})")
    if not parser.has_section("qubit"):
        raise ConfigError("[qubit]: section is required")

    try:
        qubit = QubitParams(
            f=_require(parser, "qubit", "f", float),
            kappa=_get(parser, "qubit", "kappa", float, default=0.0),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[qubit]: {exc}") from exc

    sinc = interleaved = None
    if parser.has_section("plan.sinc"):
        sinc = _parse_plan(parser, "plan.sinc", Scheme.SINC)
    if parser.has_section("plan.interleaved"):
        interleaved = _parse_plan(parser, "plan.interleaved", Scheme.INTERLEAVED)
    if sinc is None and interleaved is None:
        raise ConfigError("config must define [plan.sinc] and/or [plan.interleaved]")

    sweep_axis = sweep_values = None
    if parser.has_section("sweep"):
        sweep_axis = _require(parser, "sweep", "axis", str).strip().lower()
        if sweep_axis not in ("n", "m"):
            raise ConfigError(f"[sweep] axis: must be 'n' or 'm', got {sweep_axis!r}")
        raw_values = _require(parser, "sweep", "values", str)
        try:
            sweep_values = tuple(int(v) for v in raw_values.replace(",", " ").split())
        except ValueError:
            raise ConfigError(f"[sweep] values: cannot parse {raw_values!r}") from None
        if not sweep_values or any(v <= 0 for v in sweep_values):
            raise ConfigError("[sweep] values: need a non-empty list of positive integers")

    reps = _get(parser, "run", "reps", int)
    if reps is not None and reps < 1:
        raise ConfigError(f"[run] reps: must be >= 1, got {reps}")
    base_seed = _get(parser, "run", "base_seed", int, default=0)
    oversample = _get(parser, "run", "oversample", int, default=16)
    zero_pad = _get(parser, "run", "zero_pad", int, default=4)
    band_low = _get(parser, "run", "band_low", float)
    band_high = _get(parser, "run", "band_high", float)
    band = None
    if (band_low is None) != (band_high is None):
        raise ConfigError("[run]: band_low and band_high must be given together")
    if band_low is not None:
        if band_low >= band_high:
            raise ConfigError(f"[run]: band_low must be < band_high, got {band_low} >= {band_high}")
        band = (band_low, band_high)

    return ExperimentConfig(
        qubit=qubit,
        sinc=sinc,
        interleaved=interleaved,
        reps=reps,
        base_seed=base_seed,
        band=band,
        oversample=oversample,
        zero_pad=zero_pad,
        sweep_axis=sweep_axis,
        sweep_values=sweep_values,
    )
