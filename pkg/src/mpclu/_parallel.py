"""Thread-count plumbing.

Kernels accept a requested thread count; results are bitwise identical for
any value because every parallel decomposition assigns each output element
to exactly one task and all accumulation orders are schedule-fixed.  The
request is clamped to the pool numba actually built (the pool floor is
raised to 8 before numba initialises, see _kernels).
"""

import numba


def clamp_threads(threads):
    t = int(threads)
    if t < 1:
        raise ValueError("thread count must be >= 1")
    return min(t, numba.config.NUMBA_NUM_THREADS)


def set_threads(threads):
    numba.set_num_threads(clamp_threads(threads))
