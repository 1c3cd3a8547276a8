"""Command-line interface: simulate, analyze, replay, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

from . import __version__
from .detector import DetectorConfig, detect_offline
from .metrics import (IncompleteTrialError, aggregate, format_table,
                      summary_dict, trial_metrics)
from .occluder import table1_presets
from .service import DEFAULT_PORT, DEFAULT_PORT_ENV, SessionConfig, create_app
from .simulate import SimConfig, run_script
from .store import read_record, replay, write_record
from .telemetry import EventKind, PhaseEvent


def _parse_presets(text: str) -> List[int]:
    ids = sorted({int(p) for p in text.split(",") if p.strip()})
    known = {p.preset_id for p in table1_presets()}
    bad = [i for i in ids if i not in known]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown preset ids: {bad}")
    return ids


def cmd_simulate(args) -> int:
    presets = table1_presets()
    if args.presets:
        presets = [p for p in presets if p.preset_id in args.presets]
    cfg = SimConfig(seed=args.seed)
    if args.noise is not None:
        cfg = replace(cfg, nav_noise_sigma_N=args.noise, deploy_noise_sigma_N=args.noise)
    out_dir = Path(args.out)
    labels, trials = [], []
    for preset in presets:
        record = run_script(preset, replace(cfg, seed=args.seed + preset.preset_id))
        bundle = out_dir / record.meta["trial_id"]
        write_record(record, bundle, force=args.force)
        m = trial_metrics(record)
        labels.append(record.meta["trial_id"])
        trials.append(m)
    agg = aggregate(trials)
    print(format_table(labels, trials, agg))
    print(f"\nwrote {len(trials)} record bundle(s) to {out_dir}")
    return 0


def _find_bundles(paths: List[str]) -> List[Path]:
    bundles = []
    for p in paths:
        path = Path(p)
        if (path / "samples.csv").exists():
            bundles.append(path)
        elif path.is_dir():
            bundles.extend(sorted(d for d in path.iterdir()
                                  if (d / "samples.csv").exists()))
    return bundles


def cmd_analyze(args) -> int:
    bundles = _find_bundles(args.paths)
    if not bundles:
        print("no records found", file=sys.stderr)
        return 1
    det_cfg = DetectorConfig()
    labels, trials = [], []
    for bundle in bundles:
        record = read_record(bundle)
        record.detected_events = detect_offline(record.samples, det_cfg)
        if not any(e.kind is EventKind.E4_DETACHED for e in
                   record.truth_events + record.detected_events):
            # offline, end of trace stands in for operator detachment
            last = record.samples[-1]
            record.detected_events.append(
                PhaseEvent(EventKind.E4_DETACHED, last.t, last.displacement, last.force))
        try:
            trials.append(trial_metrics(record))
        except IncompleteTrialError as exc:
            print(f"{bundle}: {exc}", file=sys.stderr)
            return 1
        labels.append(record.meta.get("trial_id", bundle.name))
        if args.plot_data:
            plot_path = Path(args.plot_data)
            rows = ["t_s,disp_mm,force_N"]
            rows.extend(f"{s.t},{s.displacement},{s.force}" for s in record.samples)
            suffix = f"-{labels[-1]}" if len(bundles) > 1 else ""
            target = plot_path.with_name(plot_path.stem + suffix + plot_path.suffix)
            target.write_text("\n".join(rows) + "\n", encoding="utf-8")
    agg = aggregate(trials)
    print(format_table(labels, trials, agg))
    print(f"\nduration: {agg.mean['duration_s']:.2f} ± {agg.std['duration_s']:.2f} s")
    print(f"min force: {agg.mean['min_force_N']:.2f} ± {agg.std['min_force_N']:.2f} N"
          f" (most compressive {agg.most_negative_min_N:.2f} N)")
    print(f"max force: {agg.mean['max_force_N']:.2f} ± {agg.std['max_force_N']:.2f} N"
          f" (highest tensile {agg.largest_max_N:.2f} N)")
    print(f"final force: {agg.mean['final_force_N']:.2f} ± {agg.std['final_force_N']:.2f} N")
    if args.summary:
        Path(args.summary).write_text(
            json.dumps(summary_dict(labels, trials, agg), indent=1) + "\n",
            encoding="utf-8")
    return 0


def cmd_replay(args) -> int:
    record = read_record(args.path)
    print("t_s,force_N,disp_mm")
    for s in replay(record, args.speed):
        print(f"{s.t},{s.force},{s.displacement}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    config = SessionConfig.from_file(args.config) if args.config else SessionConfig()
    if args.records_dir:
        config = replace(config, records_dir=args.records_dir)
    static = args.static
    if static is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static = str(candidate) if candidate.is_dir() else None
    app = create_app(config, tick_interval=args.tick_interval, static_dir=static)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laacsim",
        description="Simulate, segment and analyze occluder deployment telemetry.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run scripted preset deployments")
    p.add_argument("--presets", type=_parse_presets, default=None,
                   help="comma-separated preset ids (default: all 10)")
    p.add_argument("--noise", type=float, default=None,
                   help="override both noise sigmas [N]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="records", help="output directory for bundles")
    p.add_argument("--force", action="store_true", help="overwrite existing bundles")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="detect events and extract metrics from records")
    p.add_argument("paths", nargs="+", help="record bundles or directories of bundles")
    p.add_argument("--plot-data", default=None,
                   help="write force-vs-displacement CSV (with time column)")
    p.add_argument("--summary", default=None, help="write JSON summary to this path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("replay", help="replay a record at original pacing")
    p.add_argument("path")
    p.add_argument("--speed", type=float, default=1.0,
                   help="speed factor; 0 = as fast as possible")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("serve", help="run the interactive session service")
    p.add_argument("--port", type=int,
                   default=int(os.environ.get(DEFAULT_PORT_ENV, DEFAULT_PORT)))
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--config", default=None, help="session config JSON file")
    p.add_argument("--records-dir", default=None)
    p.add_argument("--static", default=None, help="static assets directory")
    p.add_argument("--tick-interval", type=float, default=0.025)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
