"""Time-domain deployment session engine.

Integrates operator commands into catheter/sheath kinematics at 40 Hz,
evaluates the quasi-static occluder law, adds sensor noise and emits
telemetry samples with ground-truth procedural events.  All emitted
sample values are quantized to the 6-significant-digit sensor/storage
resolution, so persisted traces reproduce live ones bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from datetime import datetime, timezone
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from .occluder import OccluderSpec, Table1Preset, axial_force, spec_to_dict
from .telemetry import (DeploymentRecord, EventKind, PhaseEvent,
                        TelemetrySample, quantize)

# Compression magnitude defining the lobe-onset ground truth mark.
E1_ONSET_THRESHOLD_N = 1.0


class SimMode(Enum):
    NAVIGATING = "NAVIGATING"
    DEPLOYING = "DEPLOYING"
    DETACHED = "DETACHED"


class Action(Enum):
    ADVANCE = "advance"
    RETRACT = "retract"
    STOP = "stop"
    DETACH = "detach"


@dataclass(frozen=True)
class OperatorCommand:
    action: Action
    speed_mm_s: float = 0.0

    def __post_init__(self):
        if self.speed_mm_s < 0 or not math.isfinite(self.speed_mm_s):
            raise ValueError("command speed must be finite and non-negative")


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.025
    nav_depth_mm: float = 40.0
    nav_noise_sigma_N: float = 0.15
    deploy_noise_sigma_N: float = 0.10
    max_speed_mm_s: float = 10.0
    seed: int = 0

    def __post_init__(self):
        if self.dt <= 0 or self.nav_depth_mm <= 0:
            raise ValueError("dt and nav_depth must be positive")
        if self.nav_noise_sigma_N < 0 or self.deploy_noise_sigma_N < 0:
            raise ValueError("noise sigmas must be non-negative")


@dataclass
class SimState:
    t: float = 0.0
    tip_displacement_mm: float = 0.0
    sheath_retraction_mm: float = 0.0
    mode: SimMode = SimMode.NAVIGATING
    rng: np.random.Generator = field(default_factory=np.random.default_rng)
    emitted: set = field(default_factory=set)


def make_state(cfg: SimConfig) -> SimState:
    return SimState(rng=np.random.default_rng(cfg.seed))


def truth_marks(spec: OccluderSpec) -> dict:
    """Retraction values [mm] at which the truth events fire.

    E1: lobe ramp first reaches the onset compression threshold.
    E2/E3: lobe and disk snap-peak retractions.
    """
    lobe = spec.lobe
    frac = min(1.0, E1_ONSET_THRESHOLD_N / lobe.compression_depth_N) \
        if lobe.compression_depth_N > 0 else 1.0
    return {
        EventKind.E1_LOBE_ONSET: lobe.onset_mm + lobe.compression_span_mm * frac,
        EventKind.E2_LOBE_EXPANDED: lobe.snap_peak_mm,
        EventKind.E3_DISK_EXPANDED: spec.disk.snap_peak_mm,
    }


def step(state: SimState, cfg: SimConfig, spec: OccluderSpec,
         cmd: OperatorCommand) -> Tuple[SimState, TelemetrySample, Optional[PhaseEvent]]:
    """Advance the session one tick under the given operator command."""
    if state.mode is SimMode.DETACHED and cmd.action is not Action.STOP:
        raise ValueError("session detached: only STOP accepted")

    speed = min(cmd.speed_mm_s, cfg.max_speed_mm_s)
    dx = speed * cfg.dt
    x_total = spec.total_retraction_mm

    if cmd.action is Action.ADVANCE:
        state.tip_displacement_mm += dx
    elif cmd.action is Action.RETRACT:
        if state.mode is SimMode.DEPLOYING:
            # sheath retracts while the occluder is held fixed
            state.sheath_retraction_mm = min(state.sheath_retraction_mm + dx, x_total)
            state.tip_displacement_mm -= dx
        else:
            state.tip_displacement_mm = max(state.tip_displacement_mm - dx, 0.0)
    if state.mode is SimMode.NAVIGATING and state.tip_displacement_mm >= cfg.nav_depth_mm:
        state.mode = SimMode.DEPLOYING

    event: Optional[PhaseEvent] = None
    state.t += cfg.dt
    sigma = (cfg.nav_noise_sigma_N if state.mode is SimMode.NAVIGATING
             else cfg.deploy_noise_sigma_N)
    force = axial_force(spec, state.sheath_retraction_mm) \
        + state.rng.standard_normal() * sigma
    sample = TelemetrySample(t=quantize(state.t), force=quantize(force),
                             displacement=quantize(state.tip_displacement_mm))

    if cmd.action is Action.DETACH:
        state.mode = SimMode.DETACHED
        if EventKind.E4_DETACHED not in state.emitted:
            state.emitted.add(EventKind.E4_DETACHED)
            event = PhaseEvent(EventKind.E4_DETACHED, sample.t,
                               sample.displacement, sample.force)
    else:
        for kind, mark in truth_marks(spec).items():
            if kind not in state.emitted and state.sheath_retraction_mm >= mark:
                state.emitted.add(kind)
                event = PhaseEvent(kind, sample.t, sample.displacement, sample.force)
                break
    return state, sample, event


@dataclass(frozen=True)
class TrialScript:
    """Autopilot schedule: ordered (command, duration_s) segments."""

    segments: Tuple[Tuple[OperatorCommand, float], ...]


def _quantize_array(v: np.ndarray) -> np.ndarray:
    out = v.astype(float).copy()
    nz = (out != 0.0) & np.isfinite(out)
    if np.any(nz):
        d = 5.0 - np.floor(np.log10(np.abs(out[nz])))
        scale = 10.0 ** d
        out[nz] = np.round(out[nz] * scale) / scale
    return out


def run_script(preset: Table1Preset, cfg: SimConfig,
               retraction_speed_mm_s: Optional[float] = None) -> DeploymentRecord:
    """Run one scripted deployment of a preset and return the full record.

    Navigation advances to nav_depth at max speed, retraction proceeds
    uniformly through the full travel at the preset speed (or an explicit
    override), a post-deployment hold follows, then detachment.
    Deterministic for a fixed seed.
    """
    spec = preset.spec
    dt = cfg.dt
    x_total = spec.total_retraction_mm
    v_nav = cfg.max_speed_mm_s
    v = min(retraction_speed_mm_s if retraction_speed_mm_s is not None
            else preset.retraction_speed_mm_s, cfg.max_speed_mm_s)
    if v <= 0:
        raise ValueError("retraction speed must be positive")

    nav_steps = int(math.ceil(cfg.nav_depth_mm / (v_nav * dt) - 1e-9))
    retr_steps = int(math.ceil(x_total / (v * dt) - 1e-9))
    wait_steps = int(round(preset.post_deploy_wait_s / dt))
    n = nav_steps + retr_steps + wait_steps + 1  # +1 detach tick

    tip_nav = np.minimum(np.cumsum(np.full(nav_steps, v_nav * dt)), cfg.nav_depth_mm)
    depth = tip_nav[-1] if nav_steps else 0.0
    x = np.zeros(n)
    x[nav_steps:nav_steps + retr_steps] = np.minimum(
        np.cumsum(np.full(retr_steps, v * dt)), x_total)
    x[nav_steps + retr_steps:] = x_total

    tip = np.empty(n)
    tip[:nav_steps] = tip_nav
    tip[nav_steps:] = depth - x[nav_steps:]

    t = np.arange(1, n + 1) * dt
    sigma = np.where(tip < cfg.nav_depth_mm, cfg.nav_noise_sigma_N,
                     cfg.deploy_noise_sigma_N)
    rng = np.random.default_rng(cfg.seed)
    force = axial_force(spec, x) + rng.standard_normal(n) * sigma

    tq = _quantize_array(t)
    fq = _quantize_array(force)
    dq = _quantize_array(tip)
    samples = [TelemetrySample(float(tq[i]), float(fq[i]), float(dq[i]))
               for i in range(n)]

    truth: List[PhaseEvent] = []
    for kind, mark in truth_marks(spec).items():
        idx = int(np.searchsorted(x, mark, side="left"))
        if idx < n:
            s = samples[idx]
            truth.append(PhaseEvent(kind, s.t, s.displacement, s.force))
    last = samples[-1]
    truth.append(PhaseEvent(EventKind.E4_DETACHED, last.t, last.displacement, last.force))
    truth.sort(key=lambda e: e.t)

    meta = {
        "trial_id": f"preset{preset.preset_id:02d}-seed{cfg.seed}",
        "seed": cfg.seed,
        "preset_id": preset.preset_id,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "spec": spec_to_dict(spec),
        "sim_config": asdict(cfg),
        "retraction_speed_mm_s": v,
        "post_deploy_wait_s": preset.post_deploy_wait_s,
    }
    return DeploymentRecord(meta=meta, samples=samples, truth_events=truth)
