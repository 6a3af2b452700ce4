"""Configuration-driven experiment runner.

Each run_* operation executes a seeded experiment described by an
ExperimentConfig and writes its artifacts (CSV tables, one JSON summary, a
PNG figure) into an output directory.  Trial j of a run uses seed
base_seed + j, so every artifact is reproducible bit for bit from the
configuration and the base seed.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from . import plotting
from .config import ConfigError, ExperimentConfig, PlanSpec
from .dynamics import QubitParams, bloch_at
from .measurement import (
    MeasurementRecord,
    SamplingPlan,
    Scheme,
    build_sinc_schedule,
    expected_record,
    min_total_time,
    record_to_csv,
    simulate_record,
)
from .reconstruction import ReconstructedSignal, reconstruct, rendering_to_csv
from .spectral import (
    ResonanceFit,
    amplitude_spectrum,
    fit_resonance,
    fit_to_kv,
    resonance_model,
    spectrum_to_csv,
)


class WindowMismatch(ValueError):
    """Raised when plans meant to be compared do not cover matching windows."""


def central_half(window: tuple[float, float]) -> tuple[float, float]:
    """Central half of an observation window, where truncation leakage is smallest."""
    t0, t1 = window
    span = t1 - t0
    return t0 + 0.25 * span, t1 - 0.25 * span


def analytic_reference(params: QubitParams, times: np.ndarray) -> np.ndarray:
    """rz(t) from the closed-form solution on the given grid."""
    return np.array([bloch_at(params, float(t)).rz for t in times])


def central_rms(
    params: QubitParams, signal: ReconstructedSignal, grid: np.ndarray, values: np.ndarray
) -> float:
    lo, hi = central_half(signal.window)
    mask = (grid >= lo) & (grid <= hi)
    err = values[mask] - analytic_reference(params, grid[mask])
    return float(np.sqrt(np.mean(err**2)))


def _make_record(
    params: QubitParams, plan: SamplingPlan, seed: int, noiseless: bool
) -> MeasurementRecord:
    if noiseless:
        return expected_record(params, plan)
    return simulate_record(params, plan, seed)


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _resolved_reps(config: ExperimentConfig, default: int) -> int:
    return default if config.reps is None else config.reps


def run_reconstruction(
    config: ExperimentConfig, out_dir: str | Path, noiseless: bool = False
) -> dict:
    """Reconstruct the oscillation with both schemes and report RMS errors.

    Per scheme and repetition: record CSV (time, count, n, average), dense
    reconstruction CSV (time, amplitude), and an analytic reference CSV on
    the same grid; plus summary.json and reconstruction.png.
    """
    specs = config.plan_specs()
    if "sinc" not in specs or "interleaved" not in specs:
        raise ConfigError(
            "reconstruction comparison requires both [plan.sinc] and [plan.interleaved]"
        )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reps = _resolved_reps(config, default=1)
    params = config.qubit

    summary: dict = {
        "base_seed": config.base_seed,
        "noiseless": noiseless,
        "reps": reps,
        "qubit": {"f": params.f, "kappa": params.kappa},
        "schemes": {},
    }
    panels = []
    for label, spec in specs.items():
        plan = spec.build()
        step = plan.delta_t / config.oversample
        entry = {
            "m": plan.m,
            "n": plan.n,
            "delta_t": plan.delta_t,
            "k": plan.k,
            "window": list(plan.window),
            "min_total_time": min_total_time(plan),
            "total_sample_rate": plan.total_sample_rate,
            "rms_central": [],
        }
        reference_written = False
        for j in range(reps):
            seed = config.base_seed + j
            record = _make_record(params, plan, seed, noiseless)
            record_to_csv(record, out / f"{label}_samples_r{j}.csv")
            signal = reconstruct(record, plan)
            grid, values = signal.render(step)
            rendering_to_csv(grid, values, out / f"{label}_dense_r{j}.csv")
            if not reference_written:
                rendering_to_csv(grid, analytic_reference(params, grid), out / f"{label}_reference.csv")
                reference_written = True
            entry["rms_central"].append(central_rms(params, signal, grid, values))
            if j == 0:
                panels.append(
                    {
                        "title": f"{label} reconstruction (m={plan.m}, n={plan.n})",
                        "reference": (grid, analytic_reference(params, grid)),
                        "dense": (grid, values),
                        "samples": (plan.times, record.averages),
                    }
                )
        summary["schemes"][label] = entry

    sinc_plan = specs["sinc"].build()
    intl_plan = specs["interleaved"].build()
    summary["sample_count_ratio"] = intl_plan.m / sinc_plan.m
    summary["sample_rate_ratio"] = intl_plan.total_sample_rate / sinc_plan.total_sample_rate
    _write_json(out / "summary.json", summary)
    plotting.plot_reconstruction(out / "reconstruction.png", panels)
    return summary


def equivalent_sinc_plan(plan: SamplingPlan) -> SamplingPlan:
    """Sinc plan covering the same band and observation window as an interleaved plan."""
    if plan.scheme is not Scheme.INTERLEAVED:
        raise ValueError("expected an interleaved plan")
    window = float(plan.series_times[-1])
    dt_sinc = 1.0 / (2.0 * (plan.f_low + plan.bandwidth))
    m = max(2, round(window / dt_sinc))
    return build_sinc_schedule(plan.f_low, plan.bandwidth, m, plan.n)


def run_spectrum(config: ExperimentConfig, out_dir: str | Path, noiseless: bool = False) -> dict:
    """Spectrum and resonance fit of the interleaved reconstruction.

    Emits spectrum CSV, fitted-model CSV over the band, a flat key-value fit
    summary, the measurement-time comparison against the equivalent sinc
    plan, summary.json and spectrum.png.
    """
    if config.interleaved is None:
        raise ConfigError("spectrum analysis requires [plan.interleaved]")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reps = _resolved_reps(config, default=1)
    params = config.qubit
    plan = config.interleaved.build()
    band = config.fit_band(config.interleaved)

    fits: list[ResonanceFit] = []
    summary: dict = {
        "band": list(band),
        "base_seed": config.base_seed,
        "noiseless": noiseless,
        "reps": reps,
        "qubit": {"f": params.f, "kappa": params.kappa},
        "plan": {"m": plan.m, "n": plan.n, "delta_t": plan.delta_t, "k": plan.k},
        "fits": [],
    }
    for j in range(reps):
        seed = config.base_seed + j
        record = _make_record(params, plan, seed, noiseless)
        signal = reconstruct(record, plan)
        spectrum = amplitude_spectrum(signal, config.oversample, config.zero_pad)
        fit = fit_resonance(spectrum, band)
        fits.append(fit)
        spectrum_to_csv(spectrum, out / f"spectrum_r{j}.csv")
        band_freqs = spectrum.freqs[spectrum.band_slice(band)]
        model_amps = resonance_model(band_freqs, fit.f_hat, fit.kappa_hat, fit.amp_hat)
        rendering_to_csv(band_freqs, model_amps, out / f"fit_curve_r{j}.csv",
                         columns=("freq", "amp"))
        (out / f"fit_r{j}.txt").write_text(fit_to_kv(fit))
        summary["fits"].append(
            {
                "f_hat": fit.f_hat,
                "kappa_hat": fit.kappa_hat,
                "tau_hat": fit.tau_hat,
                "residual": fit.residual,
            }
        )
        if j == 0:
            plotting.plot_spectrum(
                out / "spectrum.png", spectrum.freqs, spectrum.amps, band,
                band_freqs, model_amps,
            )

    taus = [f.tau_hat for f in fits]
    summary["mean_tau_hat"] = float(np.mean(taus))
    summary["std_tau_hat"] = float(np.std(taus, ddof=1)) if reps > 1 else 0.0
    summary["mean_f_hat"] = float(np.mean([f.f_hat for f in fits]))

    sinc_plan = equivalent_sinc_plan(plan)
    summary["timing"] = {
        "interleaved_min_total_time": min_total_time(plan),
        "sinc_equivalent_m": sinc_plan.m,
        "sinc_min_total_time": min_total_time(sinc_plan),
        "min_time_ratio": min_total_time(sinc_plan) / min_total_time(plan),
        "sample_count_ratio": sinc_plan.m / plan.m,
        "sample_rate_ratio": sinc_plan.total_sample_rate / plan.total_sample_rate,
    }
    _write_json(out / "summary.json", summary)
    return summary


def _pipeline_tau(
    params: QubitParams,
    plan: SamplingPlan,
    seed: int,
    band: tuple[float, float],
    oversample: int,
    zero_pad: int,
    noiseless: bool,
) -> ResonanceFit:
    record = _make_record(params, plan, seed, noiseless)
    signal = reconstruct(record, plan)
    return fit_resonance(amplitude_spectrum(signal, oversample, zero_pad), band)


def sweep_estimates(config: ExperimentConfig, out_dir: str | Path, noiseless: bool = False) -> list[dict]:
    """Repeat the full pipeline over a sweep of n or m for every configured scheme.

    One row per (axis value, scheme) with mean and sample-std of the
    decoherence-time estimate, the mean frequency estimate, and the minimum
    total measurement time.  Failing rows carry the error name in their
    status column; the sweep continues.
    """
    if config.sweep_axis is None or not config.sweep_values:
        raise ConfigError("sweep requires a [sweep] section with axis and values")
    specs = config.plan_specs()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reps = _resolved_reps(config, default=20)
    params = config.qubit

    rows: list[dict] = []
    for value in config.sweep_values:
        for label, spec in specs.items():
            row = {
                "axis": config.sweep_axis,
                "value": value,
                "scheme": label,
                "mean_tau": math.nan,
                "std_tau": math.nan,
                "mean_f": math.nan,
                "min_total_time": math.nan,
                "reps_ok": 0,
                "status": "ok",
            }
            try:
                plan = spec.replace(**{config.sweep_axis: value}).build()
            except ValueError as exc:
                row["status"] = f"{type(exc).__name__}: {exc}"
                rows.append(row)
                continue
            row["min_total_time"] = min_total_time(plan)
            band = config.fit_band(spec)
            taus, f_hats, errors = [], [], []
            for j in range(reps):
                try:
                    fit = _pipeline_tau(
                        params, plan, config.base_seed + j, band,
                        config.oversample, config.zero_pad, noiseless,
                    )
                    taus.append(fit.tau_hat)
                    f_hats.append(fit.f_hat)
                except ValueError as exc:
                    errors.append(f"{type(exc).__name__}: {exc}")
            row["reps_ok"] = len(taus)
            if taus:
                row["mean_tau"] = float(np.mean(taus))
                row["std_tau"] = float(np.std(taus, ddof=1)) if len(taus) > 1 else 0.0
                row["mean_f"] = float(np.mean(f_hats))
            if errors:
                row["status"] = errors[0]
            rows.append(row)

    header = ["axis", "value", "scheme", "mean_tau", "std_tau", "mean_f",
              "min_total_time", "reps_ok", "status"]
    with open(out / "sweep.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[h] if h in ("axis", "scheme", "status", "value", "reps_ok")
                             else repr(float(row[h])) for h in header])

    true_tau = params.tau
    _write_json(
        out / "summary.json",
        {
            "axis": config.sweep_axis,
            "base_seed": config.base_seed,
            "noiseless": noiseless,
            "qubit": {"f": params.f, "kappa": params.kappa},
            "reps": reps,
            "rows": rows,
            "values": list(config.sweep_values),
        },
    )
    axis_label = "measurements per sample point n" if config.sweep_axis == "n" else "sample points m"
    plotting.plot_sweep(out / "sweep.png", rows, axis_label,
                        true_tau if math.isfinite(true_tau) else None)
    return rows


def report_timing(
    plans: dict[str, SamplingPlan], window_tolerance: float = 0.01
) -> dict:
    """Per-plan minimum measurement times and pairwise ratios.

    All plans must share the same band and cover observation windows equal
    within `window_tolerance` (relative).
    """
    if len(plans) < 2:
        raise ValueError("timing comparison needs at least two plans")
    labels = list(plans)
    first = plans[labels[0]]
    for label in labels[1:]:
        p = plans[label]
        if (p.f_low, p.bandwidth) != (first.f_low, first.bandwidth):
            raise WindowMismatch(
                f"plan {label!r} band ({p.f_low}, {p.bandwidth}) differs from "
                f"{labels[0]!r} ({first.f_low}, {first.bandwidth})"
            )
    ends = {label: plans[label].window[1] for label in labels}
    t_ref = max(ends.values())
    for label, end in ends.items():
        if abs(end - t_ref) / t_ref > window_tolerance:
            raise WindowMismatch(
                f"observation windows differ by more than {window_tolerance:.0%}: {ends}"
            )

    table = {
        label: {
            "scheme": plan.scheme.value,
            "m": plan.m,
            "n": plan.n,
            "delta_t": plan.delta_t,
            "total_sample_rate": plan.total_sample_rate,
            "window_end": plan.window[1],
            "min_total_time": min_total_time(plan),
        }
        for label, plan in plans.items()
    }
    ratios = {}
    for i, a in enumerate(labels):
        for b in labels[i + 1 :]:
            ratios[f"{a}/{b}"] = {
                "min_total_time": table[a]["min_total_time"] / table[b]["min_total_time"],
                "sample_count": plans[a].m / plans[b].m,
                "sample_rate": plans[a].total_sample_rate / plans[b].total_sample_rate,
            }
    return {"plans": table, "ratios": ratios}


def run_timing(config: ExperimentConfig, out_dir: str | Path) -> dict:
    """Timing comparison of the configured plans, written as CSV plus summary."""
    specs = config.plan_specs()
    if len(specs) < 2:
        raise ConfigError("timing comparison requires both [plan.sinc] and [plan.interleaved]")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = report_timing({label: spec.build() for label, spec in specs.items()})

    with open(out / "timing.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["plan", "scheme", "m", "n", "delta_t", "total_sample_rate",
                         "window_end", "min_total_time"])
        for label, row in report["plans"].items():
            writer.writerow([label, row["scheme"], row["m"], row["n"],
                             repr(row["delta_t"]), repr(row["total_sample_rate"]),
                             repr(row["window_end"]), repr(row["min_total_time"])])
    with open(out / "timing_ratios.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pair", "min_total_time", "sample_count", "sample_rate"])
        for pair, row in report["ratios"].items():
            writer.writerow([pair, repr(row["min_total_time"]), repr(row["sample_count"]),
                             repr(row["sample_rate"])])
    _write_json(out / "summary.json", report)
    return report
