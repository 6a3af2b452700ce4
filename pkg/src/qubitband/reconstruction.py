"""Continuous-time signal reconstruction from averaged measurement records.

Two interpolation schemes:

* sinc (Whittaker-Shannon), for baseband Nyquist-rate records:

      x(t) = sum_j x[j] * sinc((t - t_j) / dt)

* interleaved (second-order bandpass), combining a base series x0 at times
  t_j = j*dt and an offset series xk at t_j + k through the kernel S from
  `kernels`:

      x(t) = sum_j [ x0[j] * S(t - t_j) + xk[j] * S(-t + t_j + k) ]

  The second argument is written with the sign flip exactly as above; S is
  not assumed to be even.

Both sums are truncated to the available samples, so accuracy claims hold in
the central part of the observation window where truncation leakage is
smallest.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .kernels import InterleaveKernelParams, kernel_S
from .measurement import (
    MeasurementRecord,
    PlanMismatch,
    SamplingPlan,
    Scheme,
    split_interleaved,
)


@dataclass(frozen=True)
class ReconstructedSignal:
    """Continuous-time evaluator built from samples, valid on `window`."""

    plan: SamplingPlan
    times: np.ndarray
    values: np.ndarray
    evaluator: Callable[[np.ndarray], np.ndarray]
    window: tuple[float, float]

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = self.evaluator(t_arr)
        return float(out[0]) if np.ndim(t) == 0 else out

    def render(self, step: float) -> tuple[np.ndarray, np.ndarray]:
        """Evaluate on a uniform grid of the given step spanning the window."""
        t0, t1 = self.window
        if step <= 0:
            raise ValueError(f"grid step must be positive, got {step}")
        count = int(np.floor((t1 - t0) / step + 1e-9)) + 1
        grid = t0 + step * np.arange(count)
        return grid, self.evaluator(grid)


def _check_times(record: MeasurementRecord, expected: np.ndarray) -> None:
    if len(record.times) != len(expected) or not np.allclose(
        record.times, expected, rtol=0.0, atol=1e-9
    ):
        raise PlanMismatch("record times do not match the plan schedule")


def sinc_reconstruct(record: MeasurementRecord, plan: SamplingPlan) -> ReconstructedSignal:
    """Truncated Whittaker-Shannon interpolation of a sinc-plan record."""
    if plan.scheme is not Scheme.SINC:
        raise PlanMismatch(f"expected a sinc plan, got {plan.scheme.value}")
    _check_times(record, plan.times)
    times = plan.times.copy()
    values = record.averages.copy()
    dt = plan.delta_t

    def evaluator(t: np.ndarray) -> np.ndarray:
        return np.sinc((t[:, None] - times[None, :]) / dt) @ values

    return ReconstructedSignal(
        plan=plan, times=times, values=values, evaluator=evaluator,
        window=(float(times[0]), float(times[-1])),
    )


def interleaved_reconstruct(
    rec_base: MeasurementRecord, rec_offset: MeasurementRecord, plan: SamplingPlan
) -> ReconstructedSignal:
    """Second-order bandpass interpolation of an interleaved record pair."""
    if plan.scheme is not Scheme.INTERLEAVED:
        raise PlanMismatch(f"expected an interleaved plan, got {plan.scheme.value}")
    base_times = plan.series_times
    _check_times(rec_base, base_times)
    _check_times(rec_offset, base_times + plan.k)
    kp = InterleaveKernelParams(plan.f_low, plan.bandwidth, plan.k)
    x0 = rec_base.averages.copy()
    xk = rec_offset.averages.copy()
    times = plan.times.copy()
    values = np.empty(plan.m)
    values[0::2] = x0
    values[1::2] = xk

    def evaluator(t: np.ndarray) -> np.ndarray:
        out = np.zeros_like(t)
        for tj, v0, vk in zip(base_times, x0, xk):
            out += v0 * kernel_S(t - tj, kp)
            out += vk * kernel_S(-t + tj + plan.k, kp)
        return out

    return ReconstructedSignal(
        plan=plan, times=times, values=values, evaluator=evaluator,
        window=(float(times[0]), float(times[-1])),
    )


def reconstruct(record: MeasurementRecord, plan: SamplingPlan) -> ReconstructedSignal:
    """Reconstruct a combined record with the interpolation matching its plan."""
    if plan.scheme is Scheme.SINC:
        return sinc_reconstruct(record, plan)
    rec_base, rec_offset = split_interleaved(record, plan)
    return interleaved_reconstruct(rec_base, rec_offset, plan)


def rendering_to_csv(
    times: np.ndarray,
    amplitudes: np.ndarray,
    path: str | Path,
    columns: tuple[str, str] = ("time", "amplitude"),
) -> None:
    """Write a dense rendering as CSV, columns (time, amplitude) by default."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(columns))
        for t, a in zip(times, amplitudes):
            writer.writerow([repr(float(t)), repr(float(a))])
