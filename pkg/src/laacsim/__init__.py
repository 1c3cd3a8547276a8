"""Simulator and analysis engine for robot-assisted occluder deployment telemetry."""

__version__ = "0.1.0"

from ._kernels import BACKEND as kernel_backend  # noqa: F401
from .detector import DetectorConfig, DetectorState, detect_offline, push  # noqa: F401
from .metrics import AggregateMetrics, TrialMetrics, aggregate, trial_metrics  # noqa: F401
from .occluder import (ElementLaw, OccluderSpec, Table1Preset, axial_force,  # noqa: F401
                       element_force, get_preset, table1_presets)
from .simulate import (Action, OperatorCommand, SimConfig, SimState,  # noqa: F401
                       make_state, run_script, step)
from .store import read_record, replay, write_record  # noqa: F401
from .telemetry import (DeploymentPhase, DeploymentRecord, EventKind,  # noqa: F401
                        PhaseEvent, TelemetrySample, phase_at, validate_trace)
