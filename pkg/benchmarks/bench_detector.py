"""Benchmark the compiled detection kernel against the pure-Python one.

Runs offline detection over noisy replays of every preset with each
available backend, checks the outputs are bit-identical, and reports
throughput.

    python3 benchmarks/bench_detector.py [--seeds N] [--sigma S]
"""

import argparse
import time

import numpy as np

from laacsim._kernels import available_backends, get_backend
from laacsim.detector import DetectorConfig
from laacsim.occluder import table1_presets
from laacsim.simulate import SimConfig, run_script


def build_streams(seeds: int, sigma: float):
    streams = []
    for preset in table1_presets():
        for seed in range(seeds):
            cfg = SimConfig(nav_noise_sigma_N=sigma, deploy_noise_sigma_N=sigma,
                            seed=seed)
            rec = run_script(preset, cfg)
            streams.append(np.array([s.force for s in rec.samples]))
    return streams


def bench(backend_name: str, streams, cfg: DetectorConfig, repeats: int = 3):
    fn = get_backend(backend_name)
    args = (cfg.smoothing_window_samples, cfg.onset_threshold_N,
            cfg.onset_debounce_samples, cfg.rebound1_delta_N,
            cfg.rebound2_delta_N, cfg.peak_confirm_drop_N,
            cfg.peak_window_samples, cfg.peak_level_band_N)
    best = float("inf")
    results = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        results = [fn(f, *args) for f in streams]
        best = min(best, time.perf_counter() - t0)
    return best, results


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, default=20,
                        help="noisy replays per preset (default 20)")
    parser.add_argument("--sigma", type=float, default=0.1)
    args = parser.parse_args()

    cfg = DetectorConfig()
    streams = build_streams(args.seeds, args.sigma)
    n_samples = sum(len(f) for f in streams)
    print(f"{len(streams)} streams, {n_samples} samples total\n")

    timings = {}
    outputs = {}
    for name in available_backends():
        elapsed, results = bench(name, streams, cfg)
        timings[name] = elapsed
        outputs[name] = results
        rate = n_samples / elapsed / 1e6
        print(f"{name:>8}: {elapsed * 1e3:8.1f} ms  ({rate:6.1f} Msamples/s)")

    names = list(outputs)
    if len(names) == 2:
        assert outputs[names[0]] == outputs[names[1]], "backends disagree"
        speedup = timings["python"] / timings["cython"]
        print(f"\noutputs bit-identical; compiled speedup {speedup:.1f}x")
    else:
        print("\ncompiled kernel not built; nothing to compare")


if __name__ == "__main__":
    main()
