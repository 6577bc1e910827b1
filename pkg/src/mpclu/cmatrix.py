"""Complex matrix multiplication over the planar layout.

A complex matrix is two independent real expansion matrices (real plane,
imaginary plane).  The product is assembled from real kernel invocations:

    4M:  Re C = Re A Re B - Im A Im B      (4 products, 2 additions)
         Im C = Im A Re B + Re A Im B

    3M:  T1 = Re A Re B,  T2 = Im A Im B   (3 products, 5 additions)
         Re C = T1 - T2
         Im C = (Re A + Im A)(Re B + Im B) - T1 - T2

The real planes of both forms are the same expression evaluated the same
way, hence bitwise equal for the same real kernel.  Zero imaginary planes
take no fast path: the 3M/4M comparison stays honest.  All temporaries are
allocated per call.
"""

from dataclasses import dataclass, replace
from typing import Optional

from .ozaki import DEFAULT_SPLIT_BITS, rgemm_ozaki
from .rgemm import DEFAULT_BLOCK, DEFAULT_THRESHOLD, rgemm_blocked, rgemm_naive, rgemm_strassen
from .rmatrix import RealMatrix, mat_add, mat_sub

DEFAULT_SPLITS = {2: 6, 3: 8, 4: 12}

REAL_KERNELS = ("naive", "blocked", "strassen", "ozaki")
METHODS = ("3m", "4m")


@dataclass(frozen=True)
class KernelChoice:
    """One benchmark point: multiplication method, real kernel, parameters."""

    method: str = "3m"
    real_kernel: str = "blocked"
    block: int = DEFAULT_BLOCK
    threshold: int = DEFAULT_THRESHOLD
    d: Optional[int] = None
    split_bits: Optional[int] = None
    threads: int = 1

    def validate(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.real_kernel not in REAL_KERNELS:
            raise ValueError(f"unknown real kernel {self.real_kernel!r}")
        if self.block < 1:
            raise ValueError("block must be >= 1")
        if self.threshold < 2:
            raise ValueError("threshold must be >= 2")
        if self.d is not None and self.d < 1:
            raise ValueError("d must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        return self

    def with_threads(self, threads):
        return replace(self, threads=threads)

    def splits_for(self, k):
        return self.d if self.d is not None else DEFAULT_SPLITS.get(k, 8)


class PlanarComplexMatrix:
    """Complex matrix as two planar real matrices of equal shape and k."""

    __slots__ = ("re_plane", "im_plane")

    def __init__(self, re_plane, im_plane):
        if re_plane.data.shape != im_plane.data.shape:
            raise ValueError("planes must share shape and component count")
        self.re_plane = re_plane
        self.im_plane = im_plane

    @property
    def k(self):
        return self.re_plane.k

    @property
    def rows(self):
        return self.re_plane.rows

    @property
    def cols(self):
        return self.re_plane.cols

    @classmethod
    def zeros(cls, rows, cols, k):
        return cls(RealMatrix.zeros(rows, cols, k), RealMatrix.zeros(rows, cols, k))

    @classmethod
    def from_complex128(cls, M, k):
        import numpy as np

        M = np.asarray(M, dtype=np.complex128)
        return cls(RealMatrix.from_float64(M.real, k), RealMatrix.from_float64(M.imag, k))

    @classmethod
    def identity(cls, n, k):
        return cls(RealMatrix.identity(n, k), RealMatrix.zeros(n, n, k))

    def copy(self):
        return PlanarComplexMatrix(self.re_plane.copy(), self.im_plane.copy())

    def at(self, i, j):
        from .cscalar import ComplexScalar

        return ComplexScalar(self.re_plane.at(i, j), self.im_plane.at(i, j))

    def set_at(self, i, j, z):
        self.re_plane.set_at(i, j, z.re)
        self.im_plane.set_at(i, j, z.im)

    def bitwise_equal(self, other):
        return self.re_plane.bitwise_equal(other.re_plane) and self.im_plane.bitwise_equal(
            other.im_plane
        )

    def max_abs(self):
        return max(self.re_plane.max_abs(), self.im_plane.max_abs())

    def __repr__(self):
        return f"PlanarComplexMatrix(k={self.k}, shape={self.rows}x{self.cols})"


def _real_product(X, Y, kc):
    if kc.real_kernel == "naive":
        return rgemm_naive(X, Y, threads=kc.threads)
    if kc.real_kernel == "blocked":
        return rgemm_blocked(X, Y, block=kc.block, threads=kc.threads)
    if kc.real_kernel == "strassen":
        return rgemm_strassen(X, Y, threshold=kc.threshold, threads=kc.threads)
    return rgemm_ozaki(X, Y, kc.splits_for(X.k), threads=kc.threads, split_bits=kc.split_bits)


def _check_mm(A, B):
    if A.k != B.k:
        raise ValueError(f"component counts differ: {A.k} != {B.k}")
    if A.cols != B.rows:
        raise ValueError(f"inner dimensions differ: {A.cols} != {B.rows}")


def cgemm_4m(A, B, kc=KernelChoice(method="4m")):
    """Four real products, two plane additions."""
    _check_mm(A, B)
    kc.validate()
    t = kc.threads
    rr = _real_product(A.re_plane, B.re_plane, kc)
    ii = _real_product(A.im_plane, B.im_plane, kc)
    ir = _real_product(A.im_plane, B.re_plane, kc)
    ri = _real_product(A.re_plane, B.im_plane, kc)
    return PlanarComplexMatrix(mat_sub(rr, ii, threads=t), mat_add(ir, ri, threads=t))


def cgemm_3m(A, B, kc=KernelChoice(method="3m")):
    """Three real products, five plane additions/subtractions."""
    _check_mm(A, B)
    kc.validate()
    t = kc.threads
    t1 = _real_product(A.re_plane, B.re_plane, kc)
    t2 = _real_product(A.im_plane, B.im_plane, kc)
    sa = mat_add(A.re_plane, A.im_plane, threads=t)
    sb = mat_add(B.re_plane, B.im_plane, threads=t)
    t3 = _real_product(sa, sb, kc)
    re = mat_sub(t1, t2, threads=t)
    im = mat_sub(mat_sub(t3, t1, threads=t), t2, threads=t)
    return PlanarComplexMatrix(re, im)


def cgemm(A, B, kc):
    """Dispatch on kc.method; bitwise equal to calling the form directly."""
    kc.validate()
    if kc.method == "3m":
        return cgemm_3m(A, B, kc)
    return cgemm_4m(A, B, kc)
