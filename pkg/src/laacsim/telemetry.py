"""Shared domain types for deployment telemetry.

Sign convention, fixed project-wide: axial force is negative in
compression and positive in tension.  Units are seconds, newtons and
millimeters throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence

NOMINAL_DT_S = 0.025  # 40 Hz acquisition
RATE_JITTER_TOL = 0.20
SIG_DIGITS = 6


class DeploymentPhase(Enum):
    NAVIGATION = "NAVIGATION"
    LOBE_DEPLOYMENT = "LOBE_DEPLOYMENT"
    REPOSITIONING = "REPOSITIONING"
    DEPLOYED = "DEPLOYED"
    DETACHED = "DETACHED"


class EventKind(Enum):
    E1_LOBE_ONSET = "E1_LOBE_ONSET"
    E2_LOBE_EXPANDED = "E2_LOBE_EXPANDED"
    E3_DISK_EXPANDED = "E3_DISK_EXPANDED"
    E4_DETACHED = "E4_DETACHED"


# Phase entered at each event, in procedural order.
_PHASE_AFTER = {
    EventKind.E1_LOBE_ONSET: DeploymentPhase.LOBE_DEPLOYMENT,
    EventKind.E2_LOBE_EXPANDED: DeploymentPhase.REPOSITIONING,
    EventKind.E3_DISK_EXPANDED: DeploymentPhase.DEPLOYED,
    EventKind.E4_DETACHED: DeploymentPhase.DETACHED,
}

_KIND_ORDER = list(EventKind)


@dataclass(frozen=True)
class TelemetrySample:
    """One 40 Hz reading: time [s], axial force [N], tip displacement [mm]."""

    t: float
    force: float
    displacement: float


@dataclass(frozen=True)
class PhaseEvent:
    """A procedural transition mark annotated at one sample."""

    kind: EventKind
    t: float
    displacement: float
    force: float


@dataclass
class DeploymentRecord:
    """A full trial: metadata, sample trace, truth and detected events."""

    meta: dict
    samples: List[TelemetrySample]
    truth_events: List[PhaseEvent] = field(default_factory=list)
    detected_events: List[PhaseEvent] = field(default_factory=list)


@dataclass
class ValidationReport:
    ok: bool
    violations: List[str]


def quantize(value: float, sig_digits: int = SIG_DIGITS) -> float:
    """Round to a fixed number of significant decimal digits.

    The result is exactly the float nearest to the rounded decimal, so a
    fixed-point text round trip reproduces it bit-for-bit.
    """
    if value == 0.0 or not math.isfinite(value):
        return 0.0 if value == 0.0 else float(value)
    d = sig_digits - 1 - math.floor(math.log10(abs(value)))
    scale = 10.0 ** d
    return float(round(value * scale) / scale)


def format_fixed(value: float, sig_digits: int = SIG_DIGITS) -> str:
    """Fixed-point text with ``sig_digits`` significant digits (no exponent)."""
    if value == 0.0:
        return f"{0.0:.{sig_digits}f}"
    d = sig_digits - 1 - math.floor(math.log10(abs(value)))
    return f"{value:.{max(d, 0)}f}"


def validate_trace(samples: Sequence[TelemetrySample]) -> ValidationReport:
    """Check a trace against the acquisition contract.

    Violations (non-monotone time, inter-sample jitter beyond ±20% of the
    nominal 25 ms, non-finite values) are reported as data, not raised.
    """
    violations: List[str] = []
    lo = NOMINAL_DT_S * (1.0 - RATE_JITTER_TOL)
    hi = NOMINAL_DT_S * (1.0 + RATE_JITTER_TOL)
    prev_t: Optional[float] = None
    for i, s in enumerate(samples):
        if not math.isfinite(s.t):
            violations.append(f"non-finite time at index {i}")
        elif s.t < 0:
            violations.append(f"negative time at index {i}")
        if not math.isfinite(s.force):
            violations.append(f"non-finite force at index {i}")
        if not math.isfinite(s.displacement):
            violations.append(f"non-finite displacement at index {i}")
        if prev_t is not None and math.isfinite(s.t):
            dt = s.t - prev_t
            if dt <= 0:
                violations.append(f"non-monotone time at index {i}")
            elif not (lo <= dt <= hi):
                violations.append(f"rate jitter at index {i}: dt={dt:.6f}s")
        if math.isfinite(s.t):
            prev_t = s.t
    return ValidationReport(ok=not violations, violations=violations)


def _check_ordered(events: Sequence[PhaseEvent]) -> None:
    last_t = -math.inf
    last_k = -1
    for e in events:
        k = _KIND_ORDER.index(e.kind)
        if e.t < last_t or k <= last_k:
            raise ValueError("events must be unique per kind and time-ordered")
        last_t, last_k = e.t, k


def phase_at(events: Sequence[PhaseEvent], t: float) -> DeploymentPhase:
    """Phase in force at time ``t`` given time-ordered events.

    Intervals are closed on the left: at an event's timestamp the new
    phase already applies.  Missing later events leave the last
    established phase in force.
    """
    _check_ordered(events)
    phase = DeploymentPhase.NAVIGATION
    for e in events:
        if t >= e.t:
            phase = _PHASE_AFTER[e.kind]
        else:
            break
    return phase
