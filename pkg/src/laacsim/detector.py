"""Causal streaming segmentation of a force stream into procedural events.

E1 fires after a debounced crossing of the compressive onset threshold.
E2 and E3 are rebound peaks: a candidate arms once a wide moving average
has rebounded a delta above its running minimum (sustained for the
debounce count), and the event is emitted when the short moving average
falls a fixed confirmation drop below its candidate maximum.  The event
is annotated at the level-clipped centroid of the wide average over the
armed region (lag-compensated), which localizes sub-noise peaks far more
reliably than a raw argmax.  Detachment (E4) is operator input, never
inferred from force.

The offline path runs on a selectable kernel backend (compiled or pure
Python, see ``laacsim._kernels``); the streaming ``push`` is the plain
Python reference.  All implementations use the same arithmetic in the
same order, so their outputs are bit-identical.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ._kernels import detect_indices
from .telemetry import EventKind, PhaseEvent, TelemetrySample, validate_trace

_STAGE_PRE = 0
_STAGE_WAIT1 = 1
_STAGE_CONFIRM1 = 2
_STAGE_WAIT2 = 3
_STAGE_CONFIRM2 = 4
_STAGE_DONE = 5


@dataclass(frozen=True)
class DetectorConfig:
    smoothing_window_samples: int = 5
    onset_threshold_N: float = -1.0
    onset_debounce_samples: int = 8
    rebound1_delta_N: float = 1.5
    rebound2_delta_N: float = 0.5
    peak_confirm_drop_N: float = 0.2
    peak_window_samples: int = 21
    peak_level_band_N: float = 0.06

    def __post_init__(self):
        if self.onset_threshold_N >= 0:
            raise ValueError("onset threshold must be negative (compressive)")
        if not (self.rebound1_delta_N > self.rebound2_delta_N
                > self.peak_confirm_drop_N > 0):
            raise ValueError("deltas must satisfy delta1 > delta2 > gamma > 0")
        if self.smoothing_window_samples < 1 or self.onset_debounce_samples < 1:
            raise ValueError("window and debounce must be >= 1")
        if self.peak_window_samples < 1 or self.peak_level_band_N <= 0:
            raise ValueError("peak window must be >= 1 and level band positive")

    @classmethod
    def from_dict(cls, d: dict) -> "DetectorConfig":
        return cls(**d)


@dataclass
class DetectorState:
    """Streaming detector state; one instance per stream."""

    stage: int = _STAGE_PRE
    n: int = 0                      # samples consumed
    narrow: deque = field(default_factory=deque)
    wide: deque = field(default_factory=deque)
    ring: deque = field(default_factory=deque)  # recent samples for lag compensation
    run_len: int = 0
    run_start: Optional[TelemetrySample] = None
    running_min: float = math.inf
    arm_len: int = 0
    arm_index: int = 0
    cand_value: float = -math.inf
    kept: List[TelemetrySample] = field(default_factory=list)
    kept_start: int = 0
    wide_hist: List[float] = field(default_factory=list)
    last_t: float = -math.inf
    events: List[PhaseEvent] = field(default_factory=list)


_STAGE_EVENT = {
    _STAGE_CONFIRM1: EventKind.E2_LOBE_EXPANDED,
    _STAGE_CONFIRM2: EventKind.E3_DISK_EXPANDED,
}


def _mean(window: deque) -> float:
    s = 0.0
    for v in window:
        s += v
    return s / len(window)


def _centroid_offset(wide_hist: List[float], band: float) -> int:
    """Index offset of the level-clipped centroid within the armed region."""
    m = -math.inf
    for v in wide_hist:
        if v > m:
            m = v
    base = m - band
    num = 0.0
    den = 0.0
    for k, v in enumerate(wide_hist):
        w = v - base
        if w < 0.0:
            w = 0.0
        num += w * k
        den += w
    return int(math.floor(num / den + 0.5))


def push(state: DetectorState, cfg: DetectorConfig,
         sample: TelemetrySample) -> Tuple[DetectorState, Optional[PhaseEvent]]:
    """Feed one sample; returns the state and the event emitted, if any."""
    if sample.t <= state.last_t:
        raise ValueError(f"out-of-order sample at t={sample.t}")
    state.last_t = sample.t
    i = state.n
    lag = (cfg.peak_window_samples - 1) // 2

    state.narrow.append(sample.force)
    if len(state.narrow) > cfg.smoothing_window_samples:
        state.narrow.popleft()
    state.wide.append(sample.force)
    if len(state.wide) > cfg.peak_window_samples:
        state.wide.popleft()
    s = _mean(state.narrow)
    sw = _mean(state.wide)

    event: Optional[PhaseEvent] = None
    if state.stage == _STAGE_PRE:
        if s <= cfg.onset_threshold_N:
            if state.run_len == 0:
                state.run_start = sample
            state.run_len += 1
            if state.run_len == cfg.onset_debounce_samples:
                r = state.run_start
                event = PhaseEvent(EventKind.E1_LOBE_ONSET, r.t, r.displacement, r.force)
                state.stage = _STAGE_WAIT1
                state.running_min = sw
                state.arm_len = 0
        else:
            state.run_len = 0
    elif state.stage in (_STAGE_WAIT1, _STAGE_WAIT2):
        delta = (cfg.rebound1_delta_N if state.stage == _STAGE_WAIT1
                 else cfg.rebound2_delta_N)
        if sw < state.running_min:
            state.running_min = sw
            state.arm_len = 0
        elif sw >= state.running_min + delta:
            state.arm_len += 1
            if state.arm_len == cfg.onset_debounce_samples:
                state.cand_value = s
                state.arm_index = i
                state.kept = list(state.ring) + [sample]
                state.kept_start = i - (len(state.kept) - 1)
                state.wide_hist = [sw]
                state.stage += 1
                state.arm_len = 0
        else:
            state.arm_len = 0
    elif state.stage in (_STAGE_CONFIRM1, _STAGE_CONFIRM2):
        state.kept.append(sample)
        state.wide_hist.append(sw)
        if s > state.cand_value:
            state.cand_value = s
        elif s <= state.cand_value - cfg.peak_confirm_drop_N:
            mid = state.arm_index + _centroid_offset(state.wide_hist,
                                                     cfg.peak_level_band_N)
            idx = mid - lag
            if idx < 0:
                idx = 0
            c = state.kept[idx - state.kept_start]
            event = PhaseEvent(_STAGE_EVENT[state.stage], c.t, c.displacement, c.force)
            state.running_min = sw
            state.arm_len = 0
            state.kept = []
            state.wide_hist = []
            state.stage += 1

    if lag > 0:
        state.ring.append(sample)
        if len(state.ring) > lag:
            state.ring.popleft()
    state.n = i + 1
    if event is not None:
        state.events.append(event)
    return state, event


def detect_offline(samples: Sequence[TelemetrySample],
                   cfg: Optional[DetectorConfig] = None) -> List[PhaseEvent]:
    """Batch segmentation of a recorded trace.

    Produces exactly the events a fold of ``push`` over the samples would,
    bit-for-bit; rejects traces that fail validation.
    """
    cfg = cfg or DetectorConfig()
    report = validate_trace(samples)
    if not report.ok:
        raise ValueError("invalid trace: " + "; ".join(report.violations[:3]))
    if not samples:
        return []
    force = np.fromiter((s.force for s in samples), dtype=float, count=len(samples))
    pairs = detect_indices(force, cfg.smoothing_window_samples,
                           cfg.onset_threshold_N, cfg.onset_debounce_samples,
                           cfg.rebound1_delta_N, cfg.rebound2_delta_N,
                           cfg.peak_confirm_drop_N, cfg.peak_window_samples,
                           cfg.peak_level_band_N)
    kinds = [EventKind.E1_LOBE_ONSET, EventKind.E2_LOBE_EXPANDED,
             EventKind.E3_DISK_EXPANDED]
    out = []
    for code, idx in pairs:
        s = samples[idx]
        out.append(PhaseEvent(kinds[code], s.t, s.displacement, s.force))
    return out
