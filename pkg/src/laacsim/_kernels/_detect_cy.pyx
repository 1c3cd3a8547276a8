# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled offline detection kernel.

Mirrors detect_py.detect_indices exactly: same float operations in the
same order, so event indices are bit-identical to the pure-Python path.
"""

from libc.math cimport floor

import numpy as np


def detect_indices(double[::1] force, int w, double theta1, int debounce,
                   double delta1, double delta2, double gamma,
                   int pw, double band):
    cdef Py_ssize_t n = force.shape[0]
    cdef Py_ssize_t i, j, start, run_start = 0, arm_index = 0, mid, idx, k, hn
    cdef Py_ssize_t lag = (pw - 1) // 2
    cdef int stage = 0
    cdef int run_len = 0
    cdef int arm_len = 0
    cdef double running_min = 0.0
    cdef double cand_value = 0.0
    cdef double s, sw, delta, m, base, num, den, wt, v
    cdef double[::1] hist
    out = []
    hist_arr = np.empty(0, dtype=np.float64)
    hist = hist_arr
    hn = 0
    for i in range(n):
        start = i - w + 1
        if start < 0:
            start = 0
        s = 0.0
        for j in range(start, i + 1):
            s += force[j]
        s /= i - start + 1

        start = i - pw + 1
        if start < 0:
            start = 0
        sw = 0.0
        for j in range(start, i + 1):
            sw += force[j]
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
                    # armed region cannot outlive the trace
                    hist_arr = np.empty(n - i, dtype=np.float64)
                    hist = hist_arr
                    hist[0] = sw
                    hn = 1
                    stage += 1
                    arm_len = 0
            else:
                arm_len = 0
        elif stage == 2 or stage == 4:
            hist[hn] = sw
            hn += 1
            if s > cand_value:
                cand_value = s
            elif s <= cand_value - gamma:
                m = hist[0]
                for k in range(1, hn):
                    v = hist[k]
                    if v > m:
                        m = v
                base = m - band
                num = 0.0
                den = 0.0
                for k in range(hn):
                    wt = hist[k] - base
                    if wt < 0.0:
                        wt = 0.0
                    num += wt * k
                    den += wt
                mid = arm_index + <Py_ssize_t>floor(num / den + 0.5)
                idx = mid - lag
                if idx < 0:
                    idx = 0
                out.append((1 if stage == 2 else 2, idx))
                running_min = sw
                arm_len = 0
                hn = 0
                stage += 1
    return out
