"""Real expansion matrix multiplication kernels.

Four kernels share one value contract (C = A B at working precision) but
differ in schedule:

* naive    - triple loop, per-element inner products in ascending order
* blocked  - cache-tiled traversal; per-element accumulation order is
             unchanged, so results are bitwise the naive ones
* strassen - 7-product recursion with dynamic peeling for odd sizes,
             terminating in the blocked kernel
* ozaki    - error-free splitting over a plain binary64 product (ozaki.py)

Every kernel is deterministic for fixed inputs and parameters, and output
bits never depend on the thread count: parallel tasks own disjoint output
elements and all accumulation chains are schedule-fixed.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels as _k
from ._parallel import set_threads
from .rmatrix import RealMatrix, mat_add, mat_sub

DEFAULT_BLOCK = 16
DEFAULT_THRESHOLD = 32

_kernel_calls = {"naive": 0, "blocked": 0, "strassen": 0, "ozaki": 0}


def real_kernel_calls():
    """Snapshot of per-kernel invocation counters (top-level calls)."""
    return dict(_kernel_calls)


def reset_real_kernel_calls():
    for key in _kernel_calls:
        _kernel_calls[key] = 0


def _count(name):
    _kernel_calls[name] += 1


def _check_mm(A, B):
    if A.k != B.k:
        raise ValueError(f"component counts differ: {A.k} != {B.k}")
    if A.cols != B.rows:
        raise ValueError(f"inner dimensions differ: {A.cols} != {B.rows}")


def rgemm_naive(A, B, threads=1):
    """C[i][j] = sum_t A[i][t] B[t][j], accumulated strictly t-ascending."""
    _check_mm(A, B)
    _count("naive")
    C = RealMatrix.zeros(A.rows, B.cols, A.k)
    set_threads(threads)
    _k.rgemm_naive_k(A.data, B.data, C.data, A.k)
    return C


def rgemm_blocked(A, B, block=DEFAULT_BLOCK, threads=1):
    """Tiled traversal of the naive schedule; bitwise equal to rgemm_naive
    for any block size (tiles only reorder the element visit order)."""
    _check_mm(A, B)
    if block < 1:
        raise ValueError("block must be >= 1")
    _count("blocked")
    C = RealMatrix.zeros(A.rows, B.cols, A.k)
    set_threads(threads)
    _k.rgemm_blocked_k(A.data, B.data, C.data, A.k, block)
    return C


def rgemm_strassen(A, B, threshold=DEFAULT_THRESHOLD, threads=1):
    """Strassen recursion on square operands.

    Odd sizes peel the last row/column and fold them back as rank-1
    updates (no zero-padding, which would be wasteful at wide precisions).
    With threads > 1 the seven top-level subproducts run as independent
    tasks; deeper levels are serial, so results are thread-count invariant.
    """
    _check_mm(A, B)
    if A.rows != A.cols or B.rows != B.cols:
        raise ValueError("strassen kernel requires square operands")
    if threshold < 2:
        raise ValueError("threshold must be >= 2")
    _count("strassen")
    C = _strassen_rec(A, B, threshold, max(1, int(threads)))
    return C


def _base_mul(A, B):
    C = RealMatrix.zeros(A.rows, B.cols, A.k)
    _k.rgemm_blocked_serial(A.data, B.data, C.data, A.k, DEFAULT_BLOCK)
    return C


def _sub_serial(A, B):
    C = RealMatrix.zeros(A.rows, A.cols, A.k)
    _k.mat_add_serial(A.data, B.data, C.data, A.k, -1.0)
    return C


def _add_serial(A, B):
    C = RealMatrix.zeros(A.rows, A.cols, A.k)
    _k.mat_add_serial(A.data, B.data, C.data, A.k, 1.0)
    return C


def _quadrant(M, h, qi, qj):
    return RealMatrix(np.ascontiguousarray(M.data[:, qi * h:(qi + 1) * h, qj * h:(qj + 1) * h]))


def _strassen_rec(A, B, threshold, threads):
    n = A.rows
    if n <= threshold:
        return _base_mul(A, B)
    k = A.k
    if n % 2 == 1:
        # dynamic peeling: factor the even core, then rank-1 corrections
        m = n - 1
        A11 = RealMatrix(np.ascontiguousarray(A.data[:, :m, :m]))
        B11 = RealMatrix(np.ascontiguousarray(B.data[:, :m, :m]))
        C = RealMatrix.zeros(n, n, k)
        core = _strassen_rec(A11, B11, threshold, threads)
        C.data[:, :m, :m] = core.data
        a12 = np.ascontiguousarray(A.data[:, :m, m])
        a21 = np.ascontiguousarray(A.data[:, m:, :m])      # (k, 1, m)
        a22 = np.ascontiguousarray(A.data[:, m:, m])       # (k, 1)
        b12 = np.ascontiguousarray(B.data[:, :m, m:])      # (k, m, 1)
        b21 = np.ascontiguousarray(B.data[:, m, :m])
        b22 = np.ascontiguousarray(B.data[:, m:, m])       # (k, 1)
        _k.rank1_acc(C.data[:, :m, :m], a12, b21, k)
        c12 = np.zeros((k, m, 1))
        _k.rgemm_blocked_serial(A11.data, b12, c12, k, DEFAULT_BLOCK)
        _k.rank1_acc(c12, a12, b22, k)
        C.data[:, :m, m:] = c12
        c21 = np.zeros((k, 1, m))
        _k.rgemm_blocked_serial(a21, B11.data, c21, k, DEFAULT_BLOCK)
        _k.rank1_acc(c21, a22, b21, k)
        C.data[:, m:, :m] = c21
        c22 = np.zeros((k, 1, 1))
        _k.rgemm_blocked_serial(a21, b12, c22, k, DEFAULT_BLOCK)
        _k.rank1_acc(c22, a22, b22, k)
        C.data[:, m:, m:] = c22
        return C

    h = n // 2
    A11 = _quadrant(A, h, 0, 0)
    A12 = _quadrant(A, h, 0, 1)
    A21 = _quadrant(A, h, 1, 0)
    A22 = _quadrant(A, h, 1, 1)
    B11 = _quadrant(B, h, 0, 0)
    B12 = _quadrant(B, h, 0, 1)
    B21 = _quadrant(B, h, 1, 0)
    B22 = _quadrant(B, h, 1, 1)

    jobs = (
        (_add_serial(A11, A22), _add_serial(B11, B22)),
        (_add_serial(A21, A22), B11),
        (A11, _sub_serial(B12, B22)),
        (A22, _sub_serial(B21, B11)),
        (_add_serial(A11, A12), B22),
        (_sub_serial(A21, A11), _add_serial(B11, B12)),
        (_sub_serial(A12, A22), _add_serial(B21, B22)),
    )
    if threads > 1:
        with ThreadPoolExecutor(max_workers=min(threads, 7)) as pool:
            futs = [pool.submit(_strassen_rec, X, Y, threshold, 1) for X, Y in jobs]
            M = [f.result() for f in futs]
    else:
        M = [_strassen_rec(X, Y, threshold, 1) for X, Y in jobs]

    C = RealMatrix.zeros(n, n, A.k)
    C.data[:, :h, :h] = _add_serial(_sub_serial(_add_serial(M[0], M[3]), M[4]), M[6]).data
    C.data[:, :h, h:] = _add_serial(M[2], M[4]).data
    C.data[:, h:, :h] = _add_serial(M[1], M[3]).data
    C.data[:, h:, h:] = _add_serial(_add_serial(_sub_serial(M[0], M[1]), M[2]), M[5]).data
    return C
