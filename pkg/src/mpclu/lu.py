"""Complex LU decomposition with partial pivoting, plus triangular solves
and the benchmark error metric.

Two factorization variants share one elimination kernel:

* lu_normal  - right-looking element-wise elimination over the full
               trailing matrix at every column
* lu_blocked - K-column panel factorization (same kernel, update width
               limited to the panel), a unit-lower triangular solve for
               U12, then one trailing update A22 -= L21 U12 through a
               chosen complex matmul kernel

Pivots maximise |Re| + |Im| (a cheap 1-norm surrogate for the modulus),
ties to the lowest row, and row swaps span the entire row including the
already-factored columns, so PA = LU holds literally.  Only an exactly
zero pivot column is treated as singular; near-zero pivots proceed.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from ._parallel import set_threads
from .cmatrix import KernelChoice, PlanarComplexMatrix, cgemm
from .cscalar import ComplexScalar, csub
from .expansion import Expansion, exp_add, exp_div, exp_mul
from .rmatrix import RealMatrix, mat_sub


class SingularMatrixError(ValueError):
    def __init__(self, column):
        super().__init__(f"singular matrix at column {column}")
        self.column = column


class ComplexVector:
    """Planar complex vector: re and im are (k, n) float64 arrays."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        re = np.ascontiguousarray(re, dtype=np.float64)
        im = np.ascontiguousarray(im, dtype=np.float64)
        if re.shape != im.shape or re.ndim != 2:
            raise ValueError("re and im must be (k, n) arrays of equal shape")
        self.re = re
        self.im = im

    @property
    def k(self):
        return self.re.shape[0]

    @property
    def n(self):
        return self.re.shape[1]

    @classmethod
    def zeros(cls, n, k):
        return cls(np.zeros((k, n)), np.zeros((k, n)))

    @classmethod
    def from_scalars(cls, zs):
        k = zs[0].k
        v = cls.zeros(len(zs), k)
        for i, z in enumerate(zs):
            v.set_at(i, z)
        return v

    def at(self, i):
        return ComplexScalar(Expansion(self.re[:, i].copy()), Expansion(self.im[:, i].copy()))

    def set_at(self, i, z):
        self.re[:, i] = z.re.components
        self.im[:, i] = z.im.components

    def copy(self):
        return ComplexVector(self.re.copy(), self.im.copy())

    def bitwise_equal(self, other):
        return bool(np.array_equal(self.re, other.re) and np.array_equal(self.im, other.im))


@dataclass
class LinearSystem:
    """A x = b over planar complex storage."""

    A: PlanarComplexMatrix
    b: ComplexVector

    def __post_init__(self):
        if self.A.rows != self.A.cols:
            raise ValueError("coefficient matrix must be square")
        if self.b.n != self.A.rows or self.b.k != self.A.k:
            raise ValueError("right-hand side does not match the matrix")


@dataclass
class LUFactors:
    """Packed factors: unit-lower L below the diagonal (implicit ones),
    U on and above; pivots[i] is the row swapped into position i (>= i)."""

    packed: PlanarComplexMatrix
    pivots: np.ndarray
    method: str = "3m"

    @property
    def n(self):
        return self.packed.rows

    def lower(self):
        n, k = self.n, self.packed.k
        L = PlanarComplexMatrix.identity(n, k)
        for c in range(k):
            L.re_plane.data[c] += np.tril(self.packed.re_plane.data[c], -1)
            L.im_plane.data[c] += np.tril(self.packed.im_plane.data[c], -1)
        return L

    def upper(self):
        k = self.packed.k
        U = PlanarComplexMatrix.zeros(self.n, self.n, k)
        for c in range(k):
            U.re_plane.data[c] = np.triu(self.packed.re_plane.data[c])
            U.im_plane.data[c] = np.triu(self.packed.im_plane.data[c])
        return U


def _factor(A, K, kc, threads, method):
    n = A.rows
    k = A.k
    re = A.re_plane.data.copy()
    im = A.im_plane.data.copy()
    piv = np.arange(n, dtype=np.int64)
    use3m = method == "3m"
    set_threads(threads)
    for jb in range(0, n, K):
        kw = min(K, n - jb)
        status = _k.lu_panel(re, im, piv, jb, kw, use3m, k)
        if status >= 0:
            raise SingularMatrixError(status)
        end = jb + kw
        if end == n:
            break
        l11re = np.ascontiguousarray(re[:, jb:end, jb:end])
        l11im = np.ascontiguousarray(im[:, jb:end, jb:end])
        a12re = np.ascontiguousarray(re[:, jb:end, end:])
        a12im = np.ascontiguousarray(im[:, jb:end, end:])
        _k.trsm_ll_unit(l11re, l11im, a12re, a12im, use3m, k)
        re[:, jb:end, end:] = a12re
        im[:, jb:end, end:] = a12im
        L21 = PlanarComplexMatrix(
            RealMatrix(np.ascontiguousarray(re[:, end:, jb:end])),
            RealMatrix(np.ascontiguousarray(im[:, end:, jb:end])),
        )
        U12 = PlanarComplexMatrix(RealMatrix(a12re), RealMatrix(a12im))
        P = cgemm(L21, U12, kc)
        A22re = RealMatrix(np.ascontiguousarray(re[:, end:, end:]))
        A22im = RealMatrix(np.ascontiguousarray(im[:, end:, end:]))
        re[:, end:, end:] = mat_sub(A22re, P.re_plane, threads=threads).data
        im[:, end:, end:] = mat_sub(A22im, P.im_plane, threads=threads).data
    packed = PlanarComplexMatrix(RealMatrix(re), RealMatrix(im))
    return LUFactors(packed=packed, pivots=piv, method=method)


def lu_normal(A, threads=1, method="3m"):
    """Element-wise right-looking factorization (no matmul updates)."""
    if A.rows != A.cols:
        raise ValueError("matrix must be square")
    return _factor(A, A.rows, KernelChoice(method=method), threads, method)


def lu_blocked(A, K, kc=None, threads=1):
    """Blocked factorization with trailing updates through cgemm.

    With K = n there is a single panel and no update step: the arithmetic
    path is exactly lu_normal's, so pivots and factors match it bitwise.
    A final partial panel covers n mod K != 0.
    """
    if A.rows != A.cols:
        raise ValueError("matrix must be square")
    if not 1 <= K <= A.rows:
        raise ValueError(f"panel width K={K} outside [1, {A.rows}]")
    if kc is None:
        kc = KernelChoice()
    kc = kc.validate().with_threads(threads)
    return _factor(A, K, kc, threads, kc.method)


def trsm_unit_lower(L11, A12, method="3m", threads=1):
    """Solve L11 X = A12 for X, L11 unit lower triangular (its strictly
    lower part is read; the diagonal is implicit).  Forward substitution
    per column in deterministic order."""
    if L11.rows != L11.cols:
        raise ValueError("L11 must be square")
    if A12.rows != L11.rows or A12.k != L11.k:
        raise ValueError("A12 does not match L11")
    xre = A12.re_plane.data.copy()
    xim = A12.im_plane.data.copy()
    set_threads(threads)
    _k.trsm_ll_unit(L11.re_plane.data, L11.im_plane.data, xre, xim, method == "3m", L11.k)
    return PlanarComplexMatrix(RealMatrix(xre), RealMatrix(xim))


def solve(f, b):
    """x from L U x = P b by forward then backward substitution."""
    n = f.n
    if b.n != n or b.k != f.packed.k:
        raise ValueError("right-hand side does not match the factors")
    k = f.packed.k
    re = f.packed.re_plane.data
    im = f.packed.im_plane.data
    diag_zero = (re[0].diagonal() == 0.0) & (im[0].diagonal() == 0.0)
    if diag_zero.any():
        raise SingularMatrixError(int(np.argmax(diag_zero)))
    x = b.copy()
    _k.solve_fb(re, im, f.pivots, x.re, x.im, f.method == "3m", k)
    return x


def permuted(A, pivots):
    """Apply the factorization's row interchanges to a copy of A."""
    re = A.re_plane.data.copy()
    im = A.im_plane.data.copy()
    for i, p in enumerate(pivots):
        if p != i:
            re[:, [i, p], :] = re[:, [p, i], :]
            im[:, [i, p], :] = im[:, [p, i], :]
    return PlanarComplexMatrix(RealMatrix(re), RealMatrix(im))


def _promote_pc(M, k_new):
    return PlanarComplexMatrix(M.re_plane.promote(k_new), M.im_plane.promote(k_new))


def reconstruction_error(f, A, threads=8, extra=2):
    """max componentwise |PA - LU| over both planes (leading components).

    The L U product runs at k + extra components through the blocked
    kernel (bitwise the naive schedule), so the multiplication's own
    rounding sits ~2^106 below the factorization residual being measured.
    """
    kk = f.packed.k + extra
    PA = _promote_pc(permuted(A, f.pivots), kk)
    L = _promote_pc(f.lower(), kk)
    U = _promote_pc(f.upper(), kk)
    LU = cgemm(L, U, KernelChoice(method="3m", real_kernel="blocked", threads=threads))
    dre = mat_sub(PA.re_plane, LU.re_plane, threads=threads)
    dim = mat_sub(PA.im_plane, LU.im_plane, threads=threads)
    return max(dre.max_abs(), dim.max_abs())


def _exp_sqrt(v):
    """Newton refinement of a float seed; v > 0."""
    k = v.k
    s = Expansion.from_float(math.sqrt(v.to_float()), k)
    half = Expansion.from_float(0.5, k)
    for _ in range(3):
        s = exp_mul(exp_add(s, exp_div(v, s)), half)
    return s


def max_rel_err(xhat, x):
    """max_i |xhat_i - x_i| / |x_i| over complex moduli, at working
    precision (the square root is a Newton refinement)."""
    if xhat.n != x.n or xhat.k != x.k:
        raise ValueError("vectors must share length and component count")
    k = x.k
    best = None
    for i in range(x.n):
        xt = x.at(i)
        if xt.is_zero():
            raise ValueError(f"zero true component at index {i}")
        d = csub(xhat.at(i), xt)
        d2 = exp_add(exp_mul(d.re, d.re), exp_mul(d.im, d.im))
        x2 = exp_add(exp_mul(xt.re, xt.re), exp_mul(xt.im, xt.im))
        ratio = exp_div(d2, x2)
        if best is None or (ratio - best).components[0] > 0.0:
            best = ratio
    if best.is_zero():
        return Expansion.zero(k)
    return _exp_sqrt(best)
