"""Ozaki-scheme matrix multiplication.

The expansion operands are split into sums of binary64 matrices whose
entries carry at most `width` significant bits on a shared per-row (left
operand) or per-column (right operand) grid.  With

    width <= (53 - ceil(log2 n)) / 2

every pairwise product of split parts is a plain binary64 matrix product
with no rounding error at all, in any summation order, so the base product
can be any binary64 GEMM.  The exact products are then accumulated into the
working precision from the most significant pair group down.

The default widths are narrower than the exactness bound: they are chosen
per precision so that the division counts known to saturate accuracy do so
exactly (6 for double-double, 8 for triple-double, 12 for quad-double),
with one division fewer falling measurably short.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as _k
from ._parallel import set_threads
from .rgemm import _kernel_calls
from .rmatrix import RealMatrix

# per-k split mantissa widths; anything else falls back to the exactness bound
DEFAULT_SPLIT_BITS = {2: 19, 3: 21, 4: 18}


def split_exactness_bound(inner_n):
    """Largest split width keeping all pairwise products exact for
    inner dimension inner_n."""
    if inner_n < 1:
        raise ValueError("inner dimension must be >= 1")
    return int(53 - np.ceil(np.log2(inner_n)) if inner_n > 1 else 53) // 2


def _resolve_width(k, inner_n, split_bits):
    bound = split_exactness_bound(inner_n)
    if bound < 1:
        raise ValueError("dimension exceeds split exactness budget")
    if split_bits is None:
        return min(DEFAULT_SPLIT_BITS.get(k, bound), bound)
    if split_bits < 1:
        raise ValueError("split_bits must be >= 1")
    if split_bits > bound:
        raise ValueError("dimension exceeds split exactness budget")
    return int(split_bits)


@dataclass
class SplitStack:
    """d binary64 parts of one operand; their plain sum reconstructs the
    source to min(d * width bits, working precision).  scales[p] holds the
    finest grid unit of part p along the aligned axis (row grid for a left
    operand, column grid for a right operand): every entry of parts[p] is
    an integer multiple of its grid unit, at most 2^width units."""

    d: int
    width: int
    side: str
    parts: list = field(default_factory=list)
    scales: list = field(default_factory=list)

    @property
    def shape(self):
        return self.parts[0].shape

    def reconstruct(self):
        total = np.zeros(self.shape)
        for p in reversed(self.parts):
            total += p
        return total


def ozaki_split(A, d, side="left", split_bits=None):
    """Split a RealMatrix into d grid-aligned binary64 parts.

    side selects the exponent-alignment axis: "left" aligns per row,
    "right" per column, so that products of left and right parts share one
    grid per output element and stay exact.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    inner_n = A.cols if side == "left" else A.rows
    width = _resolve_width(A.k, inner_n, split_bits)
    k = A.k
    resid = A.data.copy()
    stack = SplitStack(d=d, width=width, side=side)
    axis = 1 if side == "left" else 0
    shift = 2.0 ** (53 - width)
    for _ in range(d):
        mu = np.abs(resid[0]).max(axis=axis)
        mant, ex = np.frexp(mu)
        w = np.ldexp(1.0, ex)                  # power of two >= mu
        sigma = w * shift
        S = sigma[:, None] if side == "left" else sigma[None, :]
        part = (resid[0] + S) - S              # resid[0] rounded to the grid
        resid[0] -= part                       # exact: low bits of resid[0]
        _k.renorm_planes(resid, k)
        stack.parts.append(part)
        stack.scales.append(np.ldexp(w, -width))
    return stack


def _pair_schedule(d, width, k):
    """Pair groups in descending significance, truncated triangularly and
    at the point where a group falls below working precision entirely."""
    cutoff = 53 * k + 53
    pairs = []
    for s in range(d):
        if s * max(width - 1, 1) >= cutoff:
            break
        for p in range(s + 1):
            pairs.append((p, s - p))
    return pairs


def rgemm_ozaki(A, B, d, threads=1, split_bits=None, f64_gemm=None):
    """C = A B through d-way error-free splitting.

    Each scheduled pairwise part product is an exact binary64 GEMM
    (np.matmul by default; f64_gemm(X, Y) -> X @ Y substitutes any other
    binary64 kernel without changing a single bit, precisely because the
    products are exact).  Products are accumulated into the result in a
    fixed significance-descending order, so bits never depend on the
    thread count.
    """
    if A.k != B.k:
        raise ValueError(f"component counts differ: {A.k} != {B.k}")
    if A.cols != B.rows:
        raise ValueError(f"inner dimensions differ: {A.cols} != {B.rows}")
    _kernel_calls["ozaki"] += 1
    k = A.k
    sa = ozaki_split(A, d, "left", split_bits)
    sb = ozaki_split(B, d, "right", split_bits)
    gemm = f64_gemm if f64_gemm is not None else np.matmul
    pairs = _pair_schedule(d, sa.width, k)
    nt = max(1, int(threads))
    if nt > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=min(nt, 8)) as pool:
            futs = [pool.submit(gemm, sa.parts[p], sb.parts[q]) for p, q in pairs]
            prods = [f.result() for f in futs]
    else:
        prods = [gemm(sa.parts[p], sb.parts[q]) for p, q in pairs]
    C = RealMatrix.zeros(A.rows, B.cols, k)
    set_threads(threads)
    for P in prods:
        _k.acc_plane(C.data, np.ascontiguousarray(P), k)
    # the insertion chain guarantees nonoverlap only in the weak sense;
    # one renormalization pass restores the strict component invariant
    _k.renorm_planes(C.data, k)
    return C
