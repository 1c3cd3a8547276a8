"""Interactive session management and the operator wire protocol.

One session per connection.  Clients send ``cmd`` messages (advance,
retract, stop, detach, reset); the server ticks the simulator at the
acquisition rate and streams ``telemetry``, ``event``, ``metrics`` and
``error`` messages, each carrying a gapless per-session sequence number.
Operator-visible phase comes from detected events only; ground truth
stays in the persisted record.
"""

from __future__ import annotations

import asyncio
import dataclasses
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from .detector import DetectorConfig, DetectorState, push
from .metrics import IncompleteTrialError, trial_metrics
from .occluder import OccluderSpec, get_preset, spec_to_dict
from .simulate import Action, OperatorCommand, SimConfig, SimMode, SimState, make_state, step
from .store import write_record
from .telemetry import DeploymentRecord, EventKind, PhaseEvent, phase_at

logger = logging.getLogger(__name__)

DEFAULT_PORT_ENV = "LAACSIM_PORT"
DEFAULT_PORT = 8765

_ACTIONS = {a.value: a for a in Action}


@dataclass(frozen=True)
class SessionConfig:
    preset_id: int = 1
    seed: int = 0
    sim: SimConfig = field(default_factory=SimConfig)
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    records_dir: Optional[str] = None

    @classmethod
    def from_dict(cls, d: dict) -> "SessionConfig":
        return cls(
            preset_id=d.get("preset_id", 1),
            seed=d.get("seed", 0),
            sim=SimConfig(**d.get("sim", {})),
            detector=DetectorConfig(**d.get("detector", {})),
            records_dir=d.get("records_dir"),
        )

    @classmethod
    def from_file(cls, path) -> "SessionConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


class Session:
    """State machine binding simulator, detector and metrics for one operator."""

    def __init__(self, config: SessionConfig = None):
        self.config = config or SessionConfig()
        self._seq = 0
        self._start(self.config.preset_id, self.config.seed)

    def _start(self, preset_id: int, seed: int) -> None:
        self.preset = get_preset(preset_id)
        self.spec: OccluderSpec = self.preset.spec
        self.sim_cfg = replace(self.config.sim, seed=seed)
        self.state: SimState = make_state(self.sim_cfg)
        self.det_state = DetectorState()
        self.pending = OperatorCommand(Action.STOP)
        self.samples = []
        self.truth_events: List[PhaseEvent] = []
        self.detected_events: List[PhaseEvent] = []
        self.closed = False
        self.last_metrics: Optional[dict] = None

    def _emit(self, msg: dict) -> dict:
        msg["seq"] = self._seq
        self._seq += 1
        return msg

    def _error(self, code: str, message: str) -> dict:
        return self._emit({"type": "error", "code": code, "message": message})

    def record(self) -> DeploymentRecord:
        return DeploymentRecord(
            meta={
                "trial_id": f"session-preset{self.preset.preset_id:02d}-seed{self.sim_cfg.seed}",
                "seed": self.sim_cfg.seed,
                "preset_id": self.preset.preset_id,
                "created_at": None,
                "spec": spec_to_dict(self.spec),
                "sim_config": dataclasses.asdict(self.sim_cfg),
            },
            samples=list(self.samples),
            truth_events=list(self.truth_events),
            detected_events=list(self.detected_events),
        )

    def handle_message(self, msg: dict) -> List[dict]:
        """Apply one client message; returns the replies to deliver."""
        if not isinstance(msg, dict) or msg.get("type") != "cmd":
            return [self._error("bad_cmd", "expected a cmd message")]
        action_name = msg.get("action")
        if action_name == "reset":
            self._start(msg.get("preset", self.config.preset_id),
                        msg.get("seed", self.config.seed))
            return []
        if action_name not in _ACTIONS:
            return [self._error("bad_cmd", f"unknown action: {action_name!r}")]
        if self.closed:
            return [self._error("session_closed", "session already detached")]
        action = _ACTIONS[action_name]
        speed = msg.get("speed_mm_s", 0.0)
        if not isinstance(speed, (int, float)) or speed < 0:
            return [self._error("bad_cmd", "speed_mm_s must be non-negative")]
        if action is Action.DETACH:
            return self._detach()
        self.pending = OperatorCommand(action, float(speed))
        return []

    def _detach(self) -> List[dict]:
        out = self._advance(OperatorCommand(Action.DETACH))
        self.closed = True
        self.pending = OperatorCommand(Action.STOP)
        record = self.record()
        if self.config.records_dir:
            bundle_dir = Path(self.config.records_dir) / record.meta["trial_id"]
            try:
                write_record(record, bundle_dir, force=True)
            except OSError:
                logger.exception("failed to persist session record")
        try:
            m = trial_metrics(record)
            self.last_metrics = m.as_dict()
            out.append(self._emit({"type": "metrics", "metrics": self.last_metrics}))
        except IncompleteTrialError as exc:
            out.append(self._error("incomplete_trial", str(exc)))
        return out

    def tick(self) -> List[dict]:
        """Advance one sample interval under the pending command."""
        if self.closed:
            return []
        return self._advance(self.pending)

    def _advance(self, cmd: OperatorCommand) -> List[dict]:
        out: List[dict] = []
        self.state, sample, truth = step(self.state, self.sim_cfg, self.spec, cmd)
        self.samples.append(sample)
        if truth is not None:
            self.truth_events.append(truth)

        detected: Optional[PhaseEvent] = None
        if cmd.action is Action.DETACH:
            # detachment is operator input, not inferred from force
            detected = PhaseEvent(EventKind.E4_DETACHED, sample.t,
                                  sample.displacement, sample.force)
        else:
            self.det_state, detected = push(self.det_state, self.config.detector, sample)
        if detected is not None:
            self.detected_events.append(detected)

        phase = phase_at(self.detected_events, sample.t)
        out.append(self._emit({
            "type": "telemetry", "t": sample.t, "force_N": sample.force,
            "disp_mm": sample.displacement, "phase": phase.value,
        }))
        if detected is not None:
            out.append(self._emit({
                "type": "event", "kind": detected.kind.value, "t": detected.t,
                "disp_mm": detected.displacement, "force_N": detected.force,
                "source": "detected",
            }))
        return out


def create_app(config: SessionConfig = None, tick_interval: float = 0.025,
               static_dir: Optional[str] = None):
    """FastAPI app exposing the session protocol at /ws.

    tick_interval is the wall-clock tick period; 0 free-runs (useful for
    scripted clients and tests).
    """
    config = config or SessionConfig()
    app = FastAPI(title="laacsim session service")

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket):
        await websocket.accept()
        session = Session(config)
        inbox: asyncio.Queue = asyncio.Queue()

        async def reader():
            try:
                while True:
                    text = await websocket.receive_text()
                    try:
                        inbox.put_nowait(json.loads(text))
                    except json.JSONDecodeError:
                        inbox.put_nowait({"type": "malformed"})
            except WebSocketDisconnect:
                inbox.put_nowait(None)

        reader_task = asyncio.create_task(reader())
        loop = asyncio.get_running_loop()
        next_tick = loop.time()
        try:
            while True:
                if session.closed:
                    msg = await inbox.get()
                    if msg is None:
                        return
                    for out in session.handle_message(msg):
                        await websocket.send_text(json.dumps(out))
                    next_tick = loop.time()
                    continue
                while not inbox.empty():
                    msg = inbox.get_nowait()
                    if msg is None:
                        return
                    for out in session.handle_message(msg):
                        await websocket.send_text(json.dumps(out))
                if not session.closed:
                    for out in session.tick():
                        await websocket.send_text(json.dumps(out))
                if tick_interval > 0:
                    next_tick += tick_interval
                    await asyncio.sleep(max(0.0, next_tick - loop.time()))
                else:
                    await asyncio.sleep(0)
        finally:
            reader_task.cancel()

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="console")
    return app
