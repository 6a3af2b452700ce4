"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from qubitband import MeasurementRecord, SamplingPlan


def record_from_values(plan: SamplingPlan, values: np.ndarray) -> MeasurementRecord:
    """Record whose averages are the given values exactly (synthetic, noiseless)."""
    values = np.asarray(values, dtype=float)
    return MeasurementRecord(
        times=plan.times, counts=plan.n * (values + 1.0) / 2.0, n=plan.n, averages=values
    )


def rms(values) -> float:
    return float(np.sqrt(np.mean(np.asarray(values) ** 2)))


@pytest.fixture(scope="session")
def weak_decay_plan():
    from qubitband import build_interleaved_schedule

    return build_interleaved_schedule(0.8, 0.4, 1.25, 160, 100)
