"""Dense real matrices of expansions, planar component layout.

data has shape (k, rows, cols), C-contiguous: every component plane is a
contiguous float64 array, so plane p holds the p-th most significant
component of every element (vector loads of consecutive elements touch one
plane only).
"""

import numpy as np

from . import _kernels as _k
from ._parallel import set_threads
from .expansion import Expansion


class RealMatrix:
    """rows x cols matrix of k-component expansions."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.ascontiguousarray(data, dtype=np.float64)
        if arr.ndim != 3:
            raise ValueError("data must have shape (k, rows, cols)")
        self.data = arr

    @property
    def k(self):
        return self.data.shape[0]

    @property
    def rows(self):
        return self.data.shape[1]

    @property
    def cols(self):
        return self.data.shape[2]

    @property
    def shape(self):
        return self.data.shape[1], self.data.shape[2]

    @classmethod
    def zeros(cls, rows, cols, k):
        return cls(np.zeros((k, rows, cols)))

    @classmethod
    def from_float64(cls, plane, k):
        """Promote a float64 matrix exactly (leading plane, zero tail)."""
        plane = np.asarray(plane, dtype=np.float64)
        if plane.ndim != 2:
            raise ValueError("plane must be 2-D")
        data = np.zeros((k,) + plane.shape)
        data[0] = plane
        return cls(data)

    @classmethod
    def identity(cls, n, k):
        data = np.zeros((k, n, n))
        np.fill_diagonal(data[0], 1.0)
        return cls(data)

    def copy(self):
        return RealMatrix(self.data.copy())

    def promote(self, k_new):
        """Exact widening to k_new >= k components."""
        k = self.k
        if k_new < k:
            raise ValueError("promote cannot narrow")
        data = np.zeros((k_new, self.rows, self.cols))
        data[:k] = self.data
        return RealMatrix(data)

    def truncate(self, k_new):
        """Round to k_new < k components (renormalized elementwise)."""
        if k_new > self.k:
            raise ValueError("truncate cannot widen")
        out = np.ascontiguousarray(self.data[:k_new].copy())
        _k.renorm_planes(out, k_new)
        return RealMatrix(out)

    def at(self, i, j):
        return Expansion(self.data[:, i, j].copy())

    def set_at(self, i, j, x):
        self.data[:, i, j] = x.components

    def max_abs(self):
        """Magnitude of the largest element (leading components only)."""
        return float(np.abs(self.data[0]).max())

    def bitwise_equal(self, other):
        return bool(np.array_equal(self.data, other.data))

    def __repr__(self):
        return f"RealMatrix(k={self.k}, shape={self.rows}x{self.cols})"


def _check_same_shape(A, B):
    if A.data.shape != B.data.shape:
        raise ValueError(f"shape mismatch: {A.data.shape} vs {B.data.shape}")


def mat_add(A, B, threads=1):
    _check_same_shape(A, B)
    C = RealMatrix.zeros(A.rows, A.cols, A.k)
    set_threads(threads)
    _k.mat_add_k(A.data, B.data, C.data, A.k, 1.0)
    return C


def mat_sub(A, B, threads=1):
    _check_same_shape(A, B)
    C = RealMatrix.zeros(A.rows, A.cols, A.k)
    set_threads(threads)
    _k.mat_add_k(A.data, B.data, C.data, A.k, -1.0)
    return C


def random_matrix(rows, cols, k, rng, full_depth=True):
    """Uniform [0, 1) leading plane; full_depth fills the remaining
    significand with scaled uniform noise so every component carries bits
    (useful for exercising precision limits in tests)."""
    data = np.zeros((k, rows, cols))
    data[0] = rng.random((rows, cols))
    if full_depth:
        for c in range(1, k):
            data[c] = (rng.random((rows, cols)) - 0.5) * np.abs(data[0]) * 2.0 ** (-52 * c)
    out = np.ascontiguousarray(data)
    _k.renorm_planes(out, k)
    return RealMatrix(out)
