"""Pure-Python offline detection kernel.

Same algorithm and float operation order as the compiled kernel and the
streaming reference, so all three produce identical event indices.
"""

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np


def detect_indices(force: np.ndarray, w: int, theta1: float, debounce: int,
                   delta1: float, delta2: float, gamma: float,
                   pw: int, band: float) -> List[Tuple[int, int]]:
    """Return (kind_code, annotated_sample_index) pairs.

    kind codes: 0 = onset (E1), 1 = first rebound peak (E2),
    2 = second rebound peak (E3).
    """
    f = force
    n = len(f)
    lag = (pw - 1) // 2
    out: List[Tuple[int, int]] = []
    stage = 0
    run_len = 0
    run_start = 0
    arm_len = 0
    arm_index = 0
    running_min = 0.0
    cand_value = 0.0
    wide_hist: List[float] = []
    for i in range(n):
        start = i - w + 1
        if start < 0:
            start = 0
        s = 0.0
        for j in range(start, i + 1):
            s += f[j]
        s /= i - start + 1

        start = i - pw + 1
        if start < 0:
            start = 0
        sw = 0.0
        for j in range(start, i + 1):
            sw += f[j]
        sw /= i - start + 1

        if stage == 0:
            if s <= theta1:
                if run_len == 0:
                    run_start = i
                run_len += 1
                if run_len == debounce:
                    out.append((0, run_start))
                    stage = 1
                    running_min = sw
                    arm_len = 0
            else:
                run_len = 0
        elif stage == 1 or stage == 3:
            delta = delta1 if stage == 1 else delta2
            if sw < running_min:
                running_min = sw
                arm_len = 0
            elif sw >= running_min + delta:
                arm_len += 1
                if arm_len == debounce:
                    cand_value = s
                    arm_index = i
                    wide_hist = [sw]
                    stage += 1
                    arm_len = 0
            else:
                arm_len = 0
        elif stage == 2 or stage == 4:
            wide_hist.append(sw)
            if s > cand_value:
                cand_value = s
            elif s <= cand_value - gamma:
                m = -math.inf
                for v in wide_hist:
                    if v > m:
                        m = v
                base = m - band
                num = 0.0
                den = 0.0
                for k, v in enumerate(wide_hist):
                    wt = v - base
                    if wt < 0.0:
                        wt = 0.0
                    num += wt * k
                    den += wt
                mid = arm_index + int(math.floor(num / den + 0.5))
                idx = mid - lag
                if idx < 0:
                    idx = 0
                out.append((1 if stage == 2 else 2, idx))
                running_min = sw
                arm_len = 0
                wide_hist = []
                stage += 1
    return out
