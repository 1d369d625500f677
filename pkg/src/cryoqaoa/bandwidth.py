"""Inter-temperature bandwidth requirements, baseline and counter-based.

The baseline streams N measurement bits per circuit execution.  The
counter-based readout streams one MSB per in-use counter entry every
2^(b-1) trials, then collects the remaining b bits per entry once at the
end over a collection window t_C.  All rates are bits per second;
durations are nanoseconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .timing import (
    GateTimings,
    DEFAULT_TIMINGS,
    circuit_time_ns,
    layer_time_ns,
    per_qubit_circuit_time_ns,
)

_NS_PER_S = 1e9


def bw_inst_bps(
    timings: GateTimings, s: int, c: int, n: int, l: int, p: int, b_p: int
) -> float:
    """Peak rate needed to deliver the 2*l*b_p parameter bits of layer l
    before that layer starts.

    For a single layer only the pre-circuit deadline exists; for more, the
    binding deadline is either the first or the last layer.
    """
    if l < 1:
        raise ValueError(f"layers must be >= 1, got {l}")
    deadline_ns = n * (timings.t_reset_ns + timings.t_init_ns)
    if deadline_ns <= 0:
        raise ValueError("reset+init window must be positive")
    first = 2 * p * b_p / deadline_ns * _NS_PER_S
    if l == 1:
        return first
    t_l = layer_time_ns(timings, s, c, n)
    if t_l <= 0:
        raise ValueError("layer time must be positive for multi-layer transfers")
    last = 2 * p * l * b_p / ((l - 1) * t_l) * _NS_PER_S
    return max(first, last)


def bw_meas_bps(timings: GateTimings, s: int, c: int, n: int, l: int, p: int) -> float:
    """Baseline readout rate: N bits per circuit execution."""
    t_qc = circuit_time_ns(timings, s, c, n, l, p)
    if t_qc <= 0:
        raise ValueError("circuit time must be positive")
    return n / t_qc * _NS_PER_S


def bw_msb_bps(m: int, b: int, t_qc_ns: float) -> float:
    """MSB stream rate: M bits per 2^(b-1) circuit executions."""
    if b < 2:
        raise ValueError(f"counter width must be >= 2, got {b}")
    if m < 1:
        raise ValueError(f"counters in use must be >= 1, got {m}")
    if t_qc_ns <= 0:
        raise ValueError("circuit time must be positive")
    return m / ((1 << (b - 1)) * t_qc_ns) * _NS_PER_S


def bw_non_msb_bps(m: int, b: int, t_c_ns: float) -> float:
    """End-of-run residual collection rate: b*M bits over t_C."""
    if t_c_ns <= 0:
        raise ValueError(f"collection time must be positive, got {t_c_ns}")
    return b * m / t_c_ns * _NS_PER_S


def min_collection_time_ns(b: int, t_qc_ns: float) -> float:
    """Smallest t_C keeping the collection rate at or below the MSB rate."""
    return b * (1 << (b - 1)) * t_qc_ns


class ChosenB(NamedTuple):
    b: int
    feasible: bool


def choose_b(t: int, r: float) -> ChosenB:
    """Largest counter width whose end-of-run collection fits the overhead
    budget: b * 2^b < 2*r*T.

    Returns b=1 with ``feasible=False`` when no width fits.
    """
    if t < 1:
        raise ValueError(f"trial count must be >= 1, got {t}")
    if r <= 0:
        raise ValueError(f"overhead fraction must be positive, got {r}")
    bound = 2 * r * t
    if 2 >= bound:  # even b=1 violates
        return ChosenB(1, False)
    b = 1
    while (b + 1) * (1 << (b + 1)) < bound:
        b += 1
    return ChosenB(b, True)


def reduction_ratio(m: int, b: int, n: int) -> float:
    """Proposed-over-baseline bandwidth ratio, (M/N) / 2^(b-1).

    The circuit time cancels between the two rates.  With M = N-1 this
    approaches 2^(1-b) from below as N grows.
    """
    if b < 2:
        raise ValueError(f"counter width must be >= 2, got {b}")
    return m / (n * (1 << (b - 1)))


def asymptotic_reduction_ratio(b: int) -> float:
    """Worst-case (M = N-1) ratio in the large-N limit: 2^(1-b)."""
    if b < 1:
        raise ValueError(f"counter width must be >= 1, got {b}")
    return 2.0 ** (1 - b)


def overhead_factor(t: int, b: int) -> float:
    """Execution-time growth: (T + b*2^(b-1)) / T."""
    if t < 1:
        raise ValueError(f"trial count must be >= 1, got {t}")
    return 1 + b * (1 << (b - 1)) / t


@dataclass(frozen=True)
class SweepRow:
    trials: int
    overhead_budget: float
    b: int
    feasible: bool
    reduction_ratio: float
    overhead_factor: float
    bw_meas_bps: float
    bw_proposed_bps: float


def staircase_sweep(
    t_values: Sequence[int],
    r_grid: Sequence[float],
    n: int = 750,
    timings: GateTimings = DEFAULT_TIMINGS,
) -> list[SweepRow]:
    """Tabulate chosen width and bandwidth ratio over (T, r) grids.

    The ratio column is the large-N worst-case value 2^(1-b), so it is a
    staircase in r (b is an integer).  Absolute rates use the canonical
    per-qubit circuit time at the given qubit count.
    """
    if not t_values or not r_grid:
        raise ValueError("sweep grids must be nonempty")
    t_qc = per_qubit_circuit_time_ns(timings)
    bw_meas = n / t_qc * _NS_PER_S
    rows = []
    for t in t_values:
        for r in r_grid:
            b, feasible = choose_b(t, r)
            ratio = asymptotic_reduction_ratio(b)
            rows.append(
                SweepRow(
                    trials=t,
                    overhead_budget=r,
                    b=b,
                    feasible=feasible,
                    reduction_ratio=ratio,
                    overhead_factor=overhead_factor(t, b),
                    bw_meas_bps=bw_meas,
                    bw_proposed_bps=bw_meas * ratio,
                )
            )
    return rows


@dataclass(frozen=True)
class BandwidthReport:
    """All rates for one scenario, plus the chosen counter width."""

    bw_inst_bps: float
    bw_meas_bps: float
    bw_msb_bps: float
    bw_non_msb_bps: float
    bw_proposed_bps: float
    reduction_ratio: float
    chosen_b: int
    b_feasible: bool
    t_c_ns: float
    overhead_factor: float
    t_qc_ns: float
    m_in_use: int


def bandwidth_report(
    timings: GateTimings,
    s: int,
    c: int,
    n: int,
    l: int,
    p: int,
    b_p: int,
    trials: int,
    overhead_budget: float | None = None,
    b: int | None = None,
    m: int | None = None,
    t_c_ns: float | None = None,
) -> BandwidthReport:
    """Assemble the full rate picture for one scenario.

    Width ``b`` is chosen from the overhead budget when not given; ``m``
    defaults to the S + C counters the instance actually uses; ``t_c``
    defaults to the minimal smoothing window, which makes the residual
    collection rate tie the MSB rate exactly.
    """
    if m is None:
        m = s + c
    feasible = True
    if b is None:
        if overhead_budget is None:
            raise ValueError("need either an explicit counter width or an overhead budget")
        b, feasible = choose_b(trials, overhead_budget)
        b = max(b, 2)  # MSB must be distinct from the payload bits
    t_qc = circuit_time_ns(timings, s, c, n, l, p)
    if t_c_ns is None:
        t_c_ns = min_collection_time_ns(b, t_qc)
    meas = bw_meas_bps(timings, s, c, n, l, p)
    if m >= 1:
        msb = bw_msb_bps(m, b, t_qc)
        non_msb = bw_non_msb_bps(m, b, t_c_ns)
    else:
        msb = 0.0
        non_msb = 0.0
    proposed = max(msb, non_msb)
    return BandwidthReport(
        bw_inst_bps=bw_inst_bps(timings, s, c, n, l, p, b_p),
        bw_meas_bps=meas,
        bw_msb_bps=msb,
        bw_non_msb_bps=non_msb,
        bw_proposed_bps=proposed,
        reduction_ratio=proposed / meas,
        chosen_b=b,
        b_feasible=feasible,
        t_c_ns=t_c_ns,
        overhead_factor=overhead_factor(trials, b),
        t_qc_ns=t_qc,
        m_in_use=m,
    )
