import math

import numpy as np
import pytest

from cryoqaoa.power import (
    DEFAULT_CABLE,
    DEFAULT_SFQ,
    CableSpec,
    SfqPowerSpec,
    cable_power,
    counter_power_per_entry_w,
    system_comparison,
    total_counter_power_w,
)
from cryoqaoa.timing import DEFAULT_TIMINGS, per_qubit_circuit_time_ns


class TestCablePower:
    def test_two_and_a_half_gbps_needs_three_cables(self):
        n_cables, _ = cable_power(2.5e9)
        assert n_cables == 3

    def test_three_cables_dissipation(self):
        _, power_mw = cable_power(2.5e9)
        assert power_mw == pytest.approx(3 * (1.0 + 10.5))

    def test_zero_bandwidth_keeps_one_cable(self):
        assert cable_power(0.0) == (1, 11.5)

    def test_exact_capacity_multiple_not_overcounted(self):
        n_cables, _ = cable_power(1e9)
        assert n_cables == 1
        n_cables, _ = cable_power(2e9)
        assert n_cables == 2

    def test_just_above_capacity_adds_cable(self):
        n_cables, _ = cable_power(1e9 * 751 / 750)
        assert n_cables == 2

    def test_negative_rejected(self):
        with pytest.raises(ValueError, match="non-negative"):
            cable_power(-1.0)


class TestCounterPower:
    def test_affine_form_b3(self):
        assert counter_power_per_entry_w(3) * 1e12 == pytest.approx(45.93, rel=1e-9)

    def test_affine_form_b10(self):
        assert counter_power_per_entry_w(10) * 1e12 == pytest.approx(113.9, rel=1e-9)

    def test_affine_match_over_width_range(self):
        for b in range(1, 21):
            expected_pw = 9.71 * b + 16.8
            actual_pw = counter_power_per_entry_w(b) * 1e12
            assert abs(actual_pw - expected_pw) / expected_pw < 0.005

    def test_default_currents_back_solved(self):
        # invert P = I*f*phi0*2 at the defaults
        scale = 2 * DEFAULT_SFQ.freq_hz * DEFAULT_SFQ.phi0_wb
        assert DEFAULT_SFQ.i_per_bit_a == pytest.approx(1.765e-3, rel=1e-3)
        assert DEFAULT_SFQ.i_fixed_a == pytest.approx(3.054e-3, rel=1e-3)
        assert counter_power_per_entry_w(5) == pytest.approx(
            (DEFAULT_SFQ.i_fixed_a + 5 * DEFAULT_SFQ.i_per_bit_a) * scale
        )

    def test_width_validated(self):
        with pytest.raises(ValueError, match="width"):
            counter_power_per_entry_w(0)

    def test_total_n1000_b10(self):
        total = total_counter_power_w(1000, 10)
        assert total == pytest.approx(500500 * 113.9e-12, rel=1e-9)
        assert total == pytest.approx(57e-6, rel=2e-2)  # tens of microwatts

    def test_single_qubit_single_entry(self):
        assert total_counter_power_w(1, 4) == counter_power_per_entry_w(4)

    def test_quadratic_scaling(self):
        ratio = total_counter_power_w(2000, 8) / total_counter_power_w(1000, 8)
        assert ratio == pytest.approx(4, rel=1e-2)


class TestSystemComparison:
    def test_crossover_at_751(self):
        comparison = system_comparison(range(2, 1200))
        assert comparison.crossover_n == 751

    def test_below_crossover_counter_overhead_only(self):
        comparison = system_comparison([100])
        baseline, proposed = comparison.rows[0]
        assert baseline.n_cables == proposed.n_cables == 1
        assert proposed.total_mw > baseline.total_mw
        assert proposed.total_mw - baseline.total_mw == pytest.approx(
            proposed.counter_power_w * 1e3
        )

    def test_baseline_power_is_non_decreasing_step_function(self):
        comparison = system_comparison(range(2, 3000))
        totals = [base.total_mw for base, _ in comparison.rows]
        assert all(a <= b for a, b in zip(totals, totals[1:]))
        levels = sorted(set(totals))
        assert levels == [11.5 * k for k in range(1, len(levels) + 1)]

    def test_baseline_steps_at_capacity_multiples(self):
        t_qc = per_qubit_circuit_time_ns(DEFAULT_TIMINGS)
        comparison = system_comparison(range(2, 3000))
        for base, _ in comparison.rows:
            expected = max(1, math.ceil(base.n_qubits / t_qc - 1e-9))
            assert base.n_cables == expected

    def test_proposed_single_cable_far_out(self):
        comparison = system_comparison([10**4, 10**5, 10**6])
        for _, proposed in comparison.rows:
            assert proposed.n_cables == 1

    def test_log_width_rate_bounded(self):
        # b = ceil(log2 N), M = N-1: between 1 and 2 bits per circuit time
        t_qc_s = per_qubit_circuit_time_ns(DEFAULT_TIMINGS) * 1e-9
        comparison = system_comparison([4, 5, 64, 65, 1024, 1025, 10**6])
        for _, proposed in comparison.rows:
            bits_per_exec = proposed.bw_required_bps * t_qc_s
            assert 1 <= bits_per_exec < 2

    def test_fixed_width_policy(self):
        comparison = system_comparison([64, 128], b_policy=3)
        for _, proposed in comparison.rows:
            assert proposed.counter_bits == 3
        n64, n128 = (p.bw_required_bps for _, p in comparison.rows)
        assert n128 / n64 == pytest.approx(127 / 63, rel=1e-12)

    def test_free_cables_never_beaten(self):
        # without cable dissipation the counters are pure overhead
        free = CableSpec(heat_inflow_mw=0.0, amp_power_mw=0.0, capacity_bps=1e9)
        comparison = system_comparison(range(2, 2000, 13), cable=free)
        assert comparison.crossover_n is None
        for baseline, proposed in comparison.rows:
            assert proposed.total_mw >= baseline.total_mw

    def test_small_n_rejected(self):
        with pytest.raises(ValueError, match="n >= 2"):
            system_comparison([1])


def test_log_width_rate_bounded_vectorized_sample():
    """Spot-check the O(1)-rate window over a dense range with numpy."""
    n = np.arange(4, 200_001)
    b = np.frexp(n - 1)[1]  # ceil(log2 n) for n >= 2, exactly
    bits_per_exec = (n - 1) / np.exp2(b - 1)
    assert bits_per_exec.min() >= 1.0
    assert bits_per_exec.max() < 2.0
