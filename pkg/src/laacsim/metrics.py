"""Per-trial deployment metrics and cohort aggregates.

Duration runs from the first retraction sample to detachment; the final
force is the mean over the last 0.5 s before detachment.  Aggregates use
the population standard deviation (divide by n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence

from .telemetry import DeploymentRecord, EventKind, PhaseEvent

FINAL_WINDOW_S = 0.5

METRIC_FIELDS = ("duration_s", "min_force_N", "max_force_N", "final_force_N")


class IncompleteTrialError(ValueError):
    pass


@dataclass(frozen=True)
class TrialMetrics:
    duration_s: float
    min_force_N: float
    max_force_N: float
    final_force_N: float

    def as_dict(self) -> Dict[str, float]:
        return {k: getattr(self, k) for k in METRIC_FIELDS}


@dataclass(frozen=True)
class AggregateMetrics:
    n: int
    mean: Dict[str, float]
    std: Dict[str, float]  # population std (divide by n)
    most_negative_min_N: float
    largest_max_N: float


def _detach_event(record: DeploymentRecord) -> PhaseEvent:
    for events in (record.truth_events, record.detected_events):
        for e in events:
            if e.kind is EventKind.E4_DETACHED:
                return e
    raise IncompleteTrialError("incomplete trial: no detachment event")


def _retraction_start_index(record: DeploymentRecord) -> int:
    """First sample where the tip displacement drops below its running max.

    Displacement carries no sensor noise, so the first strict decrease
    marks sheath retraction onset.  Flat traces fall back to the first
    sample.
    """
    peak = -math.inf
    for i, s in enumerate(record.samples):
        if s.displacement < peak:
            return i
        peak = s.displacement
    return 0


def trial_metrics(record: DeploymentRecord) -> TrialMetrics:
    """Extract duration, force extrema and final force from one trial."""
    if not record.samples:
        raise IncompleteTrialError("incomplete trial: no samples")
    e4 = _detach_event(record)
    i0 = _retraction_start_index(record)
    window = [s for s in record.samples[i0:] if s.t <= e4.t]
    if not window:
        raise IncompleteTrialError("incomplete trial: empty deployment interval")
    duration = e4.t - window[0].t
    if duration <= 0:
        raise IncompleteTrialError("incomplete trial: non-positive duration")
    forces = [s.force for s in window]
    final_window = [s.force for s in window if s.t > e4.t - FINAL_WINDOW_S]
    if not final_window:
        raise IncompleteTrialError("incomplete trial: empty final window")
    return TrialMetrics(
        duration_s=duration,
        min_force_N=min(forces),
        max_force_N=max(forces),
        final_force_N=sum(final_window) / len(final_window),
    )


def aggregate(trials: Sequence[TrialMetrics]) -> AggregateMetrics:
    """Cohort mean and population std per metric, plus force extremes."""
    if not trials:
        raise ValueError("cannot aggregate an empty list of trials")
    n = len(trials)
    mean: Dict[str, float] = {}
    std: Dict[str, float] = {}
    for name in METRIC_FIELDS:
        vals = [getattr(t, name) for t in trials]
        m = sum(vals) / n
        mean[name] = m
        std[name] = math.sqrt(sum((v - m) ** 2 for v in vals) / n)
    return AggregateMetrics(
        n=n, mean=mean, std=std,
        most_negative_min_N=min(t.min_force_N for t in trials),
        largest_max_N=max(t.max_force_N for t in trials),
    )


def format_table(labels: Sequence[str], trials: Sequence[TrialMetrics],
                 agg: AggregateMetrics = None) -> str:
    """Aligned plain-text metrics table, one row per trial."""
    header = f"{'trial':<24}{'t [s]':>10}{'min F [N]':>12}{'max F [N]':>12}{'final F [N]':>13}"
    lines = [header, "-" * len(header)]
    for label, t in zip(labels, trials):
        lines.append(f"{label:<24}{t.duration_s:>10.2f}{t.min_force_N:>12.2f}"
                     f"{t.max_force_N:>12.2f}{t.final_force_N:>13.2f}")
    if agg is not None:
        lines.append("-" * len(header))
        lines.append(f"{'mean ± std (n=%d)' % agg.n:<24}"
                     f"{agg.mean['duration_s']:>6.2f} ± {agg.std['duration_s']:.2f}"
                     f"  {agg.mean['min_force_N']:>5.2f} ± {agg.std['min_force_N']:.2f}"
                     f"  {agg.mean['max_force_N']:>5.2f} ± {agg.std['max_force_N']:.2f}"
                     f"  {agg.mean['final_force_N']:>5.2f} ± {agg.std['final_force_N']:.2f}")
        lines.append(f"{'cohort extremes':<24}  min {agg.most_negative_min_N:.2f} N"
                     f" / max {agg.largest_max_N:.2f} N")
    return "\n".join(lines)


def summary_dict(labels: Sequence[str], trials: Sequence[TrialMetrics],
                 agg: AggregateMetrics) -> dict:
    """Machine-readable analysis summary."""
    return {
        "trials": [{"trial_id": label, **t.as_dict()}
                   for label, t in zip(labels, trials)],
        "aggregate": {
            "n": agg.n,
            "mean": dict(agg.mean),
            "std": dict(agg.std),
            "most_negative_min_N": agg.most_negative_min_N,
            "largest_max_N": agg.largest_max_N,
        },
    }
