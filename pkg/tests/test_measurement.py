"""Schedules, simulated records, noise statistics and time accounting."""

import numpy as np
import pytest

from qubitband import (
    InvalidBand,
    KernelSingular,
    OddM,
    PlanMismatch,
    QubitParams,
    Scheme,
    bloch_at,
    build_interleaved_schedule,
    build_sinc_schedule,
    expected_record,
    min_total_time,
    record_from_csv,
    record_to_csv,
    simulate_record,
    split_interleaved,
)


class TestSincSchedule:
    def test_reference_band_interval(self):
        plan = build_sinc_schedule(0.8, 0.4003, 42, 100)
        assert plan.delta_t == pytest.approx(1.0 / 2.4006)
        assert plan.delta_t == pytest.approx(0.41656, abs=1e-5)
        assert len(plan.times) == 42
        assert plan.times[0] == pytest.approx(plan.delta_t)

    def test_unit_interval(self):
        plan = build_sinc_schedule(0.0, 0.5, 2, 1)
        assert np.allclose(plan.times, [1.0, 2.0])

    def test_invalid_band(self):
        with pytest.raises(InvalidBand):
            build_sinc_schedule(0.8, -1.0, 42, 100)

    def test_counts_validated(self):
        with pytest.raises(ValueError):
            build_sinc_schedule(0.8, 0.4, 1, 100)
        with pytest.raises(ValueError):
            build_sinc_schedule(0.8, 0.4, 42, 0)


class TestInterleavedSchedule:
    def test_reference_band_pairs(self):
        plan = build_interleaved_schedule(0.8, 0.4003, 2.2206, 18, 100)
        assert len(plan.series_times) == 9
        assert plan.series_times[-1] == pytest.approx(9.0 / 0.4003)  # about 22.5
        assert len(plan.times) == 18

    def test_unit_interval_half_offset(self):
        plan = build_interleaved_schedule(0.0, 1.0, 0.5, 4, 1)
        assert np.allclose(plan.times, [1.0, 1.5, 2.0, 2.5])

    def test_singular_offset_rejected(self):
        # smallest positive k with sin(r*pi*B*k) = 0 for r=5, B=0.4
        with pytest.raises(KernelSingular):
            build_interleaved_schedule(0.8, 0.4, 0.5, 18, 100)

    def test_odd_m_rejected(self):
        with pytest.raises(OddM):
            build_interleaved_schedule(0.8, 0.4, 1.25, 17, 100)

    def test_times_strictly_increasing(self):
        plan = build_interleaved_schedule(0.8, 0.4, 2.2, 40, 10)
        assert np.all(np.diff(plan.times) > 0)

    def test_total_rates(self):
        sinc = build_sinc_schedule(0.8, 0.4, 480, 100)
        intl = build_interleaved_schedule(0.8, 0.4, 1.25, 160, 100)
        assert sinc.total_sample_rate == pytest.approx(2.4)
        assert intl.total_sample_rate == pytest.approx(0.8)
        assert intl.total_sample_rate / sinc.total_sample_rate == pytest.approx(1.0 / 3.0, abs=1e-12)


class TestSimulateRecord:
    def test_deterministic_outcome_at_full_polarization(self):
        # kappa=0, integer times: rz = 1 at every sample, so every count is n
        params = QubitParams(f=1.0, kappa=0.0)
        plan = build_sinc_schedule(0.0, 0.5, 5, 50)
        record = simulate_record(params, plan, seed=123)
        assert np.all(record.counts == 50)
        assert np.all(record.averages == 1.0)

    def test_bit_identical_for_same_seed(self):
        params = QubitParams(f=1.0, kappa=0.1)
        plan = build_interleaved_schedule(0.8, 0.4, 1.25, 20, 100)
        a = simulate_record(params, plan, seed=7)
        b = simulate_record(params, plan, seed=7)
        assert np.array_equal(a.counts, b.counts)
        assert np.array_equal(a.averages, b.averages)

    def test_seeds_differ(self):
        params = QubitParams(f=1.0, kappa=0.1)
        plan = build_interleaved_schedule(0.8, 0.4, 1.25, 20, 100)
        a = simulate_record(params, plan, seed=7)
        b = simulate_record(params, plan, seed=8)
        assert not np.array_equal(a.counts, b.counts)

    def test_averages_affine_exact(self):
        params = QubitParams(f=1.0, kappa=0.1)
        plan = build_sinc_schedule(0.8, 0.4, 30, 100)
        record = simulate_record(params, plan, seed=5)
        assert np.array_equal(record.averages, 2.0 * record.counts / record.n - 1.0)

    def test_large_n_concentration(self):
        # binomial tail: |average - rz| < 4/sqrt(n) for at least 99% of
        # points across 100 seeds
        params = QubitParams(f=1.0, kappa=0.02)
        n = 10000
        plan = build_sinc_schedule(0.8, 0.4, 20, n)
        rz = np.array([bloch_at(params, float(t)).rz for t in plan.times])
        hits = total = 0
        for seed in range(100):
            record = simulate_record(params, plan, seed)
            hits += int(np.sum(np.abs(record.averages - rz) < 4.0 / np.sqrt(n)))
            total += plan.m
        assert hits / total >= 0.99

    def test_projection_noise_scaling(self):
        # record std across seeds within 20% of sqrt((1 - rz^2)/n)
        params = QubitParams(f=1.0, kappa=0.3)
        plan = build_sinc_schedule(0.0, 0.4, 12, 100)
        rz = np.array([bloch_at(params, float(t)).rz for t in plan.times])
        averages = np.array([simulate_record(params, plan, s).averages for s in range(200)])
        empirical = averages.std(axis=0, ddof=1)
        predicted = np.sqrt((1.0 - rz**2) / plan.n)
        assert np.all(np.abs(empirical / predicted - 1.0) < 0.2)

    def test_overdamped_propagates(self):
        from qubitband import OverdampedRegime

        plan = build_sinc_schedule(0.0, 0.5, 4, 10)
        with pytest.raises(OverdampedRegime):
            simulate_record(QubitParams(f=0.05, kappa=0.2), plan, seed=0)


class TestExpectedRecord:
    def test_averages_equal_rz_exactly(self):
        params = QubitParams(f=1.0, kappa=0.1)
        plan = build_sinc_schedule(0.8, 0.4003, 12, 100)
        record = expected_record(params, plan)
        rz = np.array([bloch_at(params, float(t)).rz for t in plan.times])
        assert np.array_equal(record.averages, rz)


class TestSplitInterleaved:
    def test_series_partition(self):
        params = QubitParams(f=1.0, kappa=0.1)
        plan = build_interleaved_schedule(0.8, 0.4, 1.25, 12, 40)
        record = simulate_record(params, plan, seed=3)
        base, offset = split_interleaved(record, plan)
        assert np.allclose(base.times, plan.series_times)
        assert np.allclose(offset.times, plan.series_times + plan.k)
        assert np.array_equal(np.sort(np.concatenate([base.counts, offset.counts])),
                              np.sort(record.counts))

    def test_requires_interleaved_plan(self):
        params = QubitParams(f=1.0, kappa=0.1)
        plan = build_sinc_schedule(0.8, 0.4, 12, 40)
        record = simulate_record(params, plan, seed=3)
        with pytest.raises(PlanMismatch):
            split_interleaved(record, plan)


class TestMinTotalTime:
    def test_smallest_plan_closed_form(self):
        # two points at dt=1: n * (1 + 2) = 0.5 * n * m * (m+1) * dt
        plan = build_sinc_schedule(0.0, 0.5, 2, 1)
        assert min_total_time(plan) == pytest.approx(3.0)

    def test_reference_sinc_value(self):
        plan = build_sinc_schedule(0.8, 0.4003, 42, 100)
        # 0.5 * 100 * 42 * 43 / 2.4006
        assert min_total_time(plan) == pytest.approx(37615.6, abs=0.1)
        # cross-check: explicit arithmetic series
        assert min_total_time(plan) == pytest.approx(100 * float(np.sum(plan.times)))

    def test_interleaved_includes_offsets(self):
        plan = build_interleaved_schedule(0.8, 0.4, 1.25, 18, 100)
        dt, k, pairs = plan.delta_t, plan.k, plan.m // 2
        expected = plan.n * (dt * pairs * (pairs + 1) + pairs * k)
        assert min_total_time(plan) == pytest.approx(expected)

    def test_matched_window_time_ratio(self):
        sinc = build_sinc_schedule(0.8, 0.4, 480, 100)
        intl = build_interleaved_schedule(0.8, 0.4, 1.25, 160, 100)
        ratio = min_total_time(sinc) / min_total_time(intl)
        assert ratio == pytest.approx(3.0, rel=0.05)


class TestRecordCsv:
    def test_round_trip(self, tmp_path):
        params = QubitParams(f=1.0, kappa=0.1)
        plan = build_interleaved_schedule(0.8, 0.4, 1.25, 10, 25)
        record = simulate_record(params, plan, seed=11)
        path = tmp_path / "record.csv"
        record_to_csv(record, path)
        loaded = record_from_csv(path)
        assert np.array_equal(loaded.times, record.times)
        assert np.array_equal(loaded.counts, record.counts)
        assert loaded.n == record.n
        assert np.array_equal(loaded.averages, record.averages)

    def test_round_trip_noiseless(self, tmp_path):
        params = QubitParams(f=1.0, kappa=0.1)
        plan = build_sinc_schedule(0.8, 0.4, 6, 100)
        record = expected_record(params, plan)
        path = tmp_path / "record.csv"
        record_to_csv(record, path)
        loaded = record_from_csv(path)
        assert np.array_equal(loaded.averages, record.averages)

    def test_header_schema(self, tmp_path):
        plan = build_sinc_schedule(0.8, 0.4, 6, 100)
        record = simulate_record(QubitParams(f=1.0, kappa=0.1), plan, seed=0)
        path = tmp_path / "record.csv"
        record_to_csv(record, path)
        header = path.read_text().splitlines()[0]
        assert header == "time,count,n,average"


class TestSchemeEnum:
    def test_values(self):
        assert Scheme.SINC.value == "sinc"
        assert Scheme.INTERLEAVED.value == "interleaved"
