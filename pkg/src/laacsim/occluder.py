"""Quasi-static axial force law of the sheath-occluder interaction.

The occluder is modeled as three sequential elements (lobe, waist, disk),
each contributing a compressive ramp, a linear recovery and an optional
tensile half-sine snap as a function of relative sheath retraction x.
Force depends on x only, never on retraction speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Union

import numpy as np

# (trial id, duration s, min F N, max F N, final F N)
TABLE1_ROWS = [
    (1, 18.85, -2.28, 1.09, -0.91),
    (2, 33.68, -5.32, 1.12, -0.53),
    (3, 34.98, -2.37, 0.62, -0.12),
    (4, 32.50, -2.34, 4.25, 0.16),
    (5, 27.23, -4.36, 0.05, -2.06),
    (6, 33.48, -4.37, 1.06, 0.43),
    (7, 33.58, -2.28, 1.74, 0.70),
    (8, 44.90, -2.36, 1.76, 0.15),
    (9, 33.85, -2.63, 1.11, -0.37),
    (10, 34.98, -2.37, 0.62, -0.12),
]

WAIST_DIP_N = 0.4
DISK_DIP_N = 0.8
POST_DEPLOY_WAIT_S = 2.0


@dataclass(frozen=True)
class ElementLaw:
    """Piecewise force contribution of one occluder element.

    Relative to the onset: a linear compressive ramp over
    ``compression_span_mm`` down to ``-compression_depth_N``, a linear
    recovery back to zero over ``recovery_span_mm``, then (if
    ``snap_span_mm`` > 0) a tensile half-sine of amplitude
    ``snap_amplitude_N``.  Zero outside its support.
    """

    onset_mm: float
    compression_span_mm: float
    compression_depth_N: float
    recovery_span_mm: float
    snap_span_mm: float = 0.0
    snap_amplitude_N: float = 0.0

    def __post_init__(self):
        if not all(map(math.isfinite, (self.onset_mm, self.compression_span_mm,
                                       self.compression_depth_N, self.recovery_span_mm,
                                       self.snap_span_mm, self.snap_amplitude_N))):
            raise ValueError("element law parameters must be finite")
        if self.compression_span_mm <= 0 or self.recovery_span_mm <= 0:
            raise ValueError("compression and recovery spans must be positive")
        if self.compression_depth_N < 0 or self.snap_span_mm < 0 or self.snap_amplitude_N < 0:
            raise ValueError("depth, snap span and snap amplitude must be non-negative")

    @property
    def end_mm(self) -> float:
        return self.onset_mm + self.compression_span_mm + self.recovery_span_mm + self.snap_span_mm

    @property
    def dip_mm(self) -> float:
        """Retraction at which the compressive dip bottoms out."""
        return self.onset_mm + self.compression_span_mm

    @property
    def snap_peak_mm(self) -> float:
        """Retraction of the tensile snap maximum (ramp end if no snap)."""
        base = self.onset_mm + self.compression_span_mm + self.recovery_span_mm
        return base + 0.5 * self.snap_span_mm


@dataclass(frozen=True)
class OccluderSpec:
    """Full three-element law plus settle segment and residual force."""

    lobe: ElementLaw
    waist: ElementLaw
    disk: ElementLaw
    settle_span_mm: float
    residual_force_N: float

    def __post_init__(self):
        if self.settle_span_mm <= 0:
            raise ValueError("settle span must be positive")
        if not math.isfinite(self.residual_force_N):
            raise ValueError("residual force must be finite")
        if self.lobe.end_mm > self.waist.onset_mm or self.waist.end_mm > self.disk.onset_mm:
            raise ValueError("elements must be sequential and non-overlapping")
        if not (self.lobe.compression_depth_N > self.waist.compression_depth_N
                and self.lobe.compression_depth_N > self.disk.compression_depth_N):
            raise ValueError("lobe compression must be the deepest")

    @property
    def total_retraction_mm(self) -> float:
        return self.disk.end_mm + self.settle_span_mm


@dataclass(frozen=True)
class Table1Preset:
    """One reproducible deployment: occluder spec plus a retraction schedule."""

    preset_id: int
    spec: OccluderSpec
    retraction_speed_mm_s: float
    post_deploy_wait_s: float
    targets: dict  # duration_s, min_F_N, max_F_N, final_F_N


ArrayLike = Union[float, np.ndarray]


def element_force(law: ElementLaw, x: ArrayLike) -> ArrayLike:
    """Force contribution of one element at retraction ``x`` [mm].

    Accepts scalars or numpy arrays; scalar and array paths use identical
    arithmetic so they agree bitwise.
    """
    xp = np.asarray(x, dtype=float) - law.onset_mm
    c = law.compression_span_mm
    r = law.recovery_span_mm
    s = law.snap_span_mm
    out = np.zeros_like(xp)
    ramp = (xp >= 0) & (xp < c)
    out = np.where(ramp, -(law.compression_depth_N / c) * xp, out)
    rec = (xp >= c) & (xp < c + r)
    out = np.where(rec, -law.compression_depth_N * (1.0 - (xp - c) / r), out)
    if s > 0:
        snap = (xp >= c + r) & (xp < c + r + s)
        out = np.where(snap, law.snap_amplitude_N * np.sin(np.pi * (xp - c - r) / s), out)
    if np.ndim(x) == 0:
        return float(out)
    return out


def axial_force(spec: OccluderSpec, x: ArrayLike) -> ArrayLike:
    """Total axial force [N] at relative retraction ``x`` [mm].

    Sum of the three element contributions plus the settle segment that
    ramps linearly to the residual force; constant at the residual beyond
    the total retraction; zero for x <= 0.
    """
    xa = np.asarray(x, dtype=float)
    out = (element_force(spec.lobe, xa)
           + element_force(spec.waist, xa)
           + element_force(spec.disk, xa))
    d_end = spec.disk.end_mm
    u = spec.settle_span_mm
    settle = (xa >= d_end) & (xa < d_end + u)
    out = np.where(settle, spec.residual_force_N * ((xa - d_end) / u), out)
    out = np.where(xa >= d_end + u, spec.residual_force_N, out)
    out = np.where(xa <= 0, 0.0, out)
    if np.ndim(x) == 0:
        return float(out)
    return out


def _preset_spec(min_f: float, max_f: float, final_f: float) -> OccluderSpec:
    return OccluderSpec(
        lobe=ElementLaw(onset_mm=0.0, compression_span_mm=12.0,
                        compression_depth_N=abs(min_f), recovery_span_mm=3.0,
                        snap_span_mm=3.0, snap_amplitude_N=max_f),
        waist=ElementLaw(onset_mm=18.0, compression_span_mm=4.0,
                         compression_depth_N=WAIST_DIP_N, recovery_span_mm=2.0),
        disk=ElementLaw(onset_mm=24.0, compression_span_mm=6.0,
                        compression_depth_N=DISK_DIP_N, recovery_span_mm=2.0,
                        snap_span_mm=3.0, snap_amplitude_N=max(0.8 * max_f, 0.02)),
        settle_span_mm=3.0,
        residual_force_N=final_f,
    )


def table1_presets() -> List[Table1Preset]:
    """The ten reference deployments, one per benchmark trial row."""
    presets = []
    for trial_id, duration, min_f, max_f, final_f in TABLE1_ROWS:
        spec = _preset_spec(min_f, max_f, final_f)
        speed = spec.total_retraction_mm / (duration - POST_DEPLOY_WAIT_S)
        presets.append(Table1Preset(
            preset_id=trial_id,
            spec=spec,
            retraction_speed_mm_s=speed,
            post_deploy_wait_s=POST_DEPLOY_WAIT_S,
            targets={"duration_s": duration, "min_F_N": min_f,
                     "max_F_N": max_f, "final_F_N": final_f},
        ))
    return presets


def get_preset(preset_id: int) -> Table1Preset:
    for p in table1_presets():
        if p.preset_id == preset_id:
            return p
    raise KeyError(f"unknown preset id {preset_id}")


def spec_to_dict(spec: OccluderSpec) -> dict:
    def law(e: ElementLaw) -> dict:
        return {"onset_mm": e.onset_mm, "compression_span_mm": e.compression_span_mm,
                "compression_depth_N": e.compression_depth_N,
                "recovery_span_mm": e.recovery_span_mm,
                "snap_span_mm": e.snap_span_mm, "snap_amplitude_N": e.snap_amplitude_N}
    return {"lobe": law(spec.lobe), "waist": law(spec.waist), "disk": law(spec.disk),
            "settle_span_mm": spec.settle_span_mm,
            "residual_force_N": spec.residual_force_N}


def spec_from_dict(d: dict) -> OccluderSpec:
    return OccluderSpec(lobe=ElementLaw(**d["lobe"]), waist=ElementLaw(**d["waist"]),
                        disk=ElementLaw(**d["disk"]),
                        settle_span_mm=d["settle_span_mm"],
                        residual_force_N=d["residual_force_N"])
