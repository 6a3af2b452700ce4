"""Sampling schedules, simulated projective-measurement records, and time accounting.

A record is built by preparing the qubit in the +1 eigenstate, letting it
evolve to a sample time t, measuring sigma_z, and repeating n times per
sample point.  Each measurement re-initializes the state, so every sample
point is an independent experiment whose +1 count is Binomial(n, (rz(t)+1)/2).

Two schedules are supported:

* sinc: one uniform series at the baseband Nyquist interval
  dt = 1/(2*(f_low + bandwidth)), sample times j*dt for j = 1..m.
* interleaved: two uniform series at interval dt = 1/bandwidth, the first at
  j*dt for j = 1..m/2 and the second offset by k, for a total of m points.

Sampling starts one interval after preparation; the t = 0 outcome is
deterministic and carries no information.

Because each experiment must rerun the evolution from t = 0, the minimum
wall-clock time to collect a record is n times the sum of all sample times,
which grows quadratically with the number of sample points.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import QubitParams, bloch_at, prob_plus
from .kernels import InterleaveKernelParams


class InvalidBand(ValueError):
    """Raised when a frequency band is empty or negative."""


class OddM(ValueError):
    """Raised when an interleaved schedule is asked for an odd number of points."""


class PlanMismatch(ValueError):
    """Raised when a record and a sampling plan disagree."""


class Scheme(str, enum.Enum):
    SINC = "sinc"
    INTERLEAVED = "interleaved"


@dataclass(frozen=True)
class SamplingPlan:
    """Measurement schedule: scheme, band, offset, counts and derived sample times.

    m is the total number of sample points (both series together for the
    interleaved scheme); n is the number of measurements per point.
    """

    scheme: Scheme
    f_low: float
    bandwidth: float
    m: int
    n: int
    k: float | None = None

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise InvalidBand(f"bandwidth must be positive, got {self.bandwidth}")
        if self.f_low < 0:
            raise InvalidBand(f"lower band edge must be >= 0, got {self.f_low}")
        if self.m < 2:
            raise ValueError(f"need at least 2 sample points, got m={self.m}")
        if self.n < 1:
            raise ValueError(f"need at least 1 measurement per point, got n={self.n}")
        if self.scheme is Scheme.INTERLEAVED:
            if self.m % 2 != 0:
                raise OddM(f"interleaved sampling splits m across two series, got odd m={self.m}")
            if self.k is None:
                raise ValueError("interleaved plan requires an offset k")
            # validates 0 < k < dt and distance from kernel singularities
            InterleaveKernelParams(self.f_low, self.bandwidth, self.k)

    @property
    def delta_t(self) -> float:
        """Sample interval of one series."""
        if self.scheme is Scheme.SINC:
            return 1.0 / (2.0 * (self.f_low + self.bandwidth))
        return 1.0 / self.bandwidth

    @property
    def total_sample_rate(self) -> float:
        """Aggregate sample rate: 2*(f_low+B) for sinc, 2*B for interleaved."""
        if self.scheme is Scheme.SINC:
            return 2.0 * (self.f_low + self.bandwidth)
        return 2.0 * self.bandwidth

    @property
    def series_times(self) -> np.ndarray:
        """Primary-series times j*dt, j = 1..m (sinc) or 1..m/2 (interleaved)."""
        count = self.m if self.scheme is Scheme.SINC else self.m // 2
        return np.arange(1, count + 1) * self.delta_t

    @property
    def times(self) -> np.ndarray:
        """All sample times in increasing order."""
        base = self.series_times
        if self.scheme is Scheme.SINC:
            return base
        merged = np.empty(self.m)
        merged[0::2] = base
        merged[1::2] = base + self.k
        return merged

    @property
    def window(self) -> tuple[float, float]:
        """Span [first sample time, last sample time]."""
        t = self.times
        return float(t[0]), float(t[-1])


@dataclass(frozen=True)
class MeasurementRecord:
    """Per-sample-point +1 counts out of n, and the averaged values 2*c/n - 1.

    counts holds integers for simulated records; the noiseless variant stores
    the expected count n*P+ instead, keeping the same affine relation.
    """

    times: np.ndarray
    counts: np.ndarray
    n: int
    averages: np.ndarray

    def __post_init__(self):
        if not (len(self.times) == len(self.counts) == len(self.averages)):
            raise ValueError("times, counts and averages must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("sample times must be strictly increasing")


def build_sinc_schedule(f_low: float, bandwidth: float, m: int, n: int) -> SamplingPlan:
    """Uniform Nyquist-rate schedule for the baseband [0, f_low + bandwidth]."""
    return SamplingPlan(scheme=Scheme.SINC, f_low=f_low, bandwidth=bandwidth, m=m, n=n)


def build_interleaved_schedule(
    f_low: float, bandwidth: float, k: float, m: int, n: int
) -> SamplingPlan:
    """Two rate-B series offset by k, m points in total (m/2 per series)."""
    return SamplingPlan(
        scheme=Scheme.INTERLEAVED, f_low=f_low, bandwidth=bandwidth, m=m, n=n, k=k
    )


def _point_rng(seed: int, index: int) -> np.random.Generator:
    # sub-stream per sample point, independent of evaluation order
    return np.random.default_rng([seed, index])


def simulate_record(params: QubitParams, plan: SamplingPlan, seed: int) -> MeasurementRecord:
    """Simulate n projective measurements at each sample time of the plan.

    counts[i] ~ Binomial(n, (rz(t_i)+1)/2), drawn from an independent
    sub-stream derived from (seed, i), so the record is reproducible and
    independent of iteration order.
    """
    times = plan.times
    counts = np.empty(plan.m, dtype=np.int64)
    for i, t in enumerate(times):
        p = prob_plus(bloch_at(params, float(t)))
        counts[i] = _point_rng(seed, i).binomial(plan.n, p)
    averages = 2.0 * counts / plan.n - 1.0
    return MeasurementRecord(times=times, counts=counts, n=plan.n, averages=averages)


def expected_record(params: QubitParams, plan: SamplingPlan) -> MeasurementRecord:
    """Noiseless record: averages equal rz(t) exactly (the n -> inf limit)."""
    times = plan.times
    rz = np.array([bloch_at(params, float(t)).rz for t in times])
    return MeasurementRecord(
        times=times, counts=plan.n * (rz + 1.0) / 2.0, n=plan.n, averages=rz
    )


def split_interleaved(
    record: MeasurementRecord, plan: SamplingPlan
) -> tuple[MeasurementRecord, MeasurementRecord]:
    """Split a combined interleaved record into its two series (base, offset)."""
    if plan.scheme is not Scheme.INTERLEAVED:
        raise PlanMismatch("can only split records of interleaved plans")
    if len(record.times) != plan.m or not np.allclose(record.times, plan.times, atol=1e-12):
        raise PlanMismatch("record times do not match the plan schedule")

    def pick(sl: slice) -> MeasurementRecord:
        return MeasurementRecord(
            times=record.times[sl],
            counts=record.counts[sl],
            n=record.n,
            averages=record.averages[sl],
        )

    return pick(slice(0, None, 2)), pick(slice(1, None, 2))


def min_total_time(plan: SamplingPlan) -> float:
    """Minimum total measurement time: n times the sum of all sample times.

    Every one of the n repeats at sample time t requires re-preparing the
    state and evolving for t, so one uniform series of m points at interval
    dt costs n*m*(m+1)*dt/2; the interleaved offsets add n*(m/2)*k on top.
    """
    return plan.n * float(np.sum(plan.times))


def record_to_csv(record: MeasurementRecord, path: str | Path) -> None:
    """Write a record as CSV with columns (time, count, n, average)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "count", "n", "average"])
        for t, c, a in zip(record.times, record.counts, record.averages):
            count = int(c) if float(c).is_integer() else float(c)
            writer.writerow([repr(float(t)), count, record.n, repr(float(a))])


def record_from_csv(path: str | Path) -> MeasurementRecord:
    """Read a record written by `record_to_csv`."""
    times, counts, ns, averages = [], [], [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            times.append(float(row["time"]))
            counts.append(float(row["count"]))
            ns.append(int(row["n"]))
            averages.append(float(row["average"]))
    if len(set(ns)) != 1:
        raise ValueError(f"inconsistent repeat counts in {path}")
    counts_arr = np.array(counts)
    if np.all(counts_arr == np.round(counts_arr)):
        counts_arr = counts_arr.astype(np.int64)
    return MeasurementRecord(
        times=np.array(times), counts=counts_arr, n=ns[0], averages=np.array(averages)
    )


def sample_count_ratio(plan_a: SamplingPlan, plan_b: SamplingPlan) -> float:
    """Ratio of total sample counts m_a / m_b."""
    return plan_a.m / plan_b.m


def sample_rate_ratio(plan_a: SamplingPlan, plan_b: SamplingPlan) -> float:
    """Ratio of aggregate sample rates."""
    return plan_a.total_sample_rate / plan_b.total_sample_rate
