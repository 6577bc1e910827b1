"""Compiled kernels for multi-component expansion arithmetic.

Everything in this module is numba-jitted and operates on raw float64
arrays.  Matrices use the planar layout (k, rows, cols): all components of
equal significance form one contiguous plane.  Nothing here validates
shapes; the public wrappers do.

Strict IEEE semantics are required throughout (no fastmath): the error-free
transformations and Dekker splitting rely on exact rounding behaviour.
"""

import os

# The benchmark contract accepts thread counts up to 8 regardless of the
# host's core count; raise numba's pool ceiling before it initialises.
os.environ.setdefault("NUMBA_NUM_THREADS", str(max(8, os.cpu_count() or 1)))
# OpenMP layer: predictable and quiet (the TBB probe warns on older TBBs)
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

import numpy as np
from numba import njit, prange

_SPLITTER = 134217729.0  # 2^27 + 1, Dekker split constant

MAX_K = 16


@njit(cache=True, inline="always")
def two_sum(a, b):
    """Error-free sum: s = fl(a+b), s + e == a + b exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


@njit(cache=True, inline="always")
def quick_two_sum(a, b):
    """Error-free sum assuming |a| >= |b| or a == 0."""
    s = a + b
    e = b - (s - a)
    return s, e


@njit(cache=True, inline="always")
def two_prod(a, b):
    """Error-free product via Dekker splitting: p + e == a*b exactly.

    Valid while neither a*b nor the split parts overflow and the exact
    residual stays above the subnormal range.
    """
    p = a * b
    ca = _SPLITTER * a
    ahi = ca - (ca - a)
    alo = a - ahi
    cb = _SPLITTER * b
    bhi = cb - (cb - b)
    blo = b - bhi
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


# ---------------------------------------------------------------------------
# Renormalization
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _sort_desc(buf, m):
    # insertion sort by (|v| desc, v desc); deterministic for any argument
    # order of the originating operation, which makes add/mul commutative
    for i in range(1, m):
        v = buf[i]
        av = abs(v)
        j = i - 1
        while j >= 0 and (abs(buf[j]) < av or (abs(buf[j]) == av and buf[j] < v)):
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = v


@njit(cache=True, inline="always")
def _vecsum_extract(buf, m, out, k):
    # bottom-up error-free sweep, then top-down extraction that skips the
    # exact (error-free) merges so zeros never occupy significant slots
    s = buf[m - 1]
    for i in range(m - 2, -1, -1):
        s, e = two_sum(buf[i], s)
        buf[i + 1] = e
    buf[0] = s
    for i in range(k):
        out[i] = 0.0
    j = 0
    eps = buf[0]
    for i in range(m - 1):
        r, enew = two_sum(eps, buf[i + 1])
        if enew != 0.0:
            if j >= k - 1:
                eps = r
                break
            out[j] = r
            j += 1
            eps = enew
        else:
            eps = r
    out[j] = eps


@njit(cache=True, inline="always")
def _is_nonoverlapping(out, k):
    # magnitude chain |lo| <= ulp(hi)/2, plus head stability hi + lo == hi
    # (the latter catches binade-boundary pairs such as (2^57, -16) where
    # the magnitude bound holds but hi is not the rounding of the value)
    for i in range(k - 1):
        hi = out[i]
        lo = out[i + 1]
        if hi == 0.0:
            if lo != 0.0:
                return False
        elif abs(lo) > 0.5 * np.spacing(abs(hi)) or hi + lo != hi:
            return False
    return True


@njit(cache=True)
def renorm(buf, m, out, k):
    """Renormalize buf[:m] into k nonoverlapping components (buf is clobbered).

    One magnitude sort, one error-free sweep, one extraction; heavy
    cancellation can leave a marginal overlap, in which case the sweep is
    repeated on the k survivors (converges in one extra pass in practice).
    """
    _sort_desc(buf, m)
    _vecsum_extract(buf, m, out, k)
    it = 0
    while not _is_nonoverlapping(out, k) and it < 6:
        for i in range(k):
            buf[i] = out[i]
        _vecsum_extract(buf, k, out, k)
        it += 1


# ---------------------------------------------------------------------------
# Double-double fast paths (k == 2)
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def dd_add(x0, x1, y0, y1):
    # accurate variant: both error terms folded back before renormalizing
    s1, s2 = two_sum(x0, y0)
    t1, t2 = two_sum(x1, y1)
    s2 += t1
    s1, s2 = quick_two_sum(s1, s2)
    s2 += t2
    s1, s2 = quick_two_sum(s1, s2)
    return s1, s2


@njit(cache=True, inline="always")
def dd_mul(x0, x1, y0, y1):
    p, e = two_prod(x0, y0)
    t = x0 * y1 + x1 * y0
    e += t + x1 * y1
    p, e = quick_two_sum(p, e)
    return p, e


# ---------------------------------------------------------------------------
# Generic expansion arithmetic on (k,) slices
#
# All *_core routines may write `out` over one of their inputs: inputs are
# fully consumed (copied into buf or registers) before out is written.
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def exp_add_core(x, y, buf, out, k):
    if k == 2:
        s0, s1 = dd_add(x[0], x[1], y[0], y[1])
        out[0] = s0
        out[1] = s1
        return
    for i in range(k):
        buf[i] = x[i]
        buf[k + i] = y[i]
    renorm(buf, 2 * k, out, k)


@njit(cache=True, inline="always")
def exp_sub_core(x, y, buf, out, k):
    if k == 2:
        s0, s1 = dd_add(x[0], x[1], -y[0], -y[1])
        out[0] = s0
        out[1] = s1
        return
    for i in range(k):
        buf[i] = x[i]
        buf[k + i] = -y[i]
    renorm(buf, 2 * k, out, k)


@njit(cache=True, inline="always")
def exp_mul_core(x, y, buf, out, k):
    # exact partial products through level k-2; levels k-1 and k enter as
    # plain products whose rounding error sits below the k-component ulp
    if k == 2:
        p0, p1 = dd_mul(x[0], x[1], y[0], y[1])
        out[0] = p0
        out[1] = p1
        return
    m = 0
    for s in range(k - 1):
        for i in range(s + 1):
            p, e = two_prod(x[i], y[s - i])
            buf[m] = p
            buf[m + 1] = e
            m += 2
    for i in range(k):
        buf[m] = x[i] * y[k - 1 - i]
        m += 1
    for i in range(1, k):
        buf[m] = x[i] * y[k - i]
        m += 1
    renorm(buf, m, out, k)


@njit(cache=True)
def exp_div_core(x, y, buf, out, k):
    """Long division: k+1 quotient digits, each peeling a refined residual."""
    q = np.empty(k + 2)
    r = np.empty(k)
    t = np.empty(k)
    for i in range(k):
        r[i] = x[i]
    nq = 0
    for it in range(k + 1):
        qi = r[0] / y[0]
        q[nq] = qi
        nq += 1
        if qi == 0.0 or it == k:
            break
        # r -= qi * y, at working precision
        m = 0
        for i in range(k):
            buf[m] = r[i]
            m += 1
        for i in range(k):
            p, e = two_prod(qi, y[i])
            buf[m] = -p
            buf[m + 1] = -e
            m += 2
        renorm(buf, m, t, k)
        for i in range(k):
            r[i] = t[i]
    for i in range(nq):
        buf[i] = q[i]
    renorm(buf, nq, out, k)


@njit(cache=True, inline="always")
def exp_abs_core(x, out, k):
    if x[0] < 0.0:
        for i in range(k):
            out[i] = -x[i]
    else:
        for i in range(k):
            out[i] = x[i]


@njit(cache=True)
def scratch_len(k):
    # enough for the densest user: the multiplication term list
    return k * k + 2 * k + 4


# single-element wrappers (allocate their own scratch)

@njit(cache=True)
def exp_add1(x, y, k):
    out = np.empty(k)
    buf = np.empty(scratch_len(k))
    exp_add_core(x, y, buf, out, k)
    return out


@njit(cache=True)
def exp_sub1(x, y, k):
    out = np.empty(k)
    buf = np.empty(scratch_len(k))
    exp_sub_core(x, y, buf, out, k)
    return out


@njit(cache=True)
def exp_mul1(x, y, k):
    out = np.empty(k)
    buf = np.empty(scratch_len(k))
    exp_mul_core(x, y, buf, out, k)
    return out


@njit(cache=True)
def exp_div1(x, y, k):
    out = np.empty(k)
    buf = np.empty(scratch_len(k))
    exp_div_core(x, y, buf, out, k)
    return out


@njit(cache=True)
def renorm1(raw, k):
    out = np.empty(k)
    buf = np.empty(max(raw.shape[0] + 2, scratch_len(k)))
    for i in range(raw.shape[0]):
        buf[i] = raw[i]
    renorm(buf, raw.shape[0], out, k)
    return out


@njit(cache=True)
def nonoverlapping1(x, k):
    return _is_nonoverlapping(x, k)


# ---------------------------------------------------------------------------
# Elementwise matrix kernels, planar (k, m, n) layout
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def mat_add_k(A, B, C, k, sign):
    m = A.shape[1]
    n = A.shape[2]
    for i in prange(m):
        x = np.empty(k)
        y = np.empty(k)
        out = np.empty(k)
        buf = np.empty(scratch_len(k))
        for j in range(n):
            for c in range(k):
                x[c] = A[c, i, j]
                y[c] = sign * B[c, i, j]
            exp_add_core(x, y, buf, out, k)
            for c in range(k):
                C[c, i, j] = out[c]


@njit(cache=True, nogil=True)
def mat_add_serial(A, B, C, k, sign):
    m = A.shape[1]
    n = A.shape[2]
    x = np.empty(k)
    y = np.empty(k)
    out = np.empty(k)
    buf = np.empty(scratch_len(k))
    for i in range(m):
        for j in range(n):
            for c in range(k):
                x[c] = A[c, i, j]
                y[c] = sign * B[c, i, j]
            exp_add_core(x, y, buf, out, k)
            for c in range(k):
                C[c, i, j] = out[c]


@njit(cache=True, inline="always")
def _gemm_row_run(A, B, C, k, i, j0, j1, t0, t1, acc, x, y, out, buf, fresh):
    # extends the accumulation chain of C[i, j0:j1] over inner indices
    # [t0, t1); the chain order is strictly t-ascending for every element
    for j in range(j0, j1):
        if fresh:
            for c in range(k):
                acc[c] = 0.0
        else:
            for c in range(k):
                acc[c] = C[c, i, j]
        for t in range(t0, t1):
            for c in range(k):
                x[c] = A[c, i, t]
                y[c] = B[c, t, j]
            exp_mul_core(x, y, buf, out, k)
            exp_add_core(acc, out, buf, acc, k)
        for c in range(k):
            C[c, i, j] = acc[c]


@njit(cache=True, parallel=True)
def rgemm_naive_k(A, B, C, k):
    m = A.shape[1]
    n = A.shape[2]
    l = B.shape[2]
    for i in prange(m):
        acc = np.empty(k)
        x = np.empty(k)
        y = np.empty(k)
        out = np.empty(k)
        buf = np.empty(scratch_len(k))
        _gemm_row_run(A, B, C, k, i, 0, l, 0, n, acc, x, y, out, buf, True)


@njit(cache=True, nogil=True)
def rgemm_naive_serial(A, B, C, k):
    m = A.shape[1]
    n = A.shape[2]
    l = B.shape[2]
    acc = np.empty(k)
    x = np.empty(k)
    y = np.empty(k)
    out = np.empty(k)
    buf = np.empty(scratch_len(k))
    for i in range(m):
        _gemm_row_run(A, B, C, k, i, 0, l, 0, n, acc, x, y, out, buf, True)


@njit(cache=True, parallel=True)
def rgemm_blocked_k(A, B, C, k, bs):
    # tiles reorder only the (i, j) traversal; each element's inner-product
    # chain stays t-ascending, so the result is bitwise the naive one
    m = A.shape[1]
    n = A.shape[2]
    l = B.shape[2]
    nit = (m + bs - 1) // bs
    for ib in prange(nit):
        acc = np.empty(k)
        x = np.empty(k)
        y = np.empty(k)
        out = np.empty(k)
        buf = np.empty(scratch_len(k))
        i0 = ib * bs
        i1 = min(i0 + bs, m)
        for t0 in range(0, n, bs):
            t1 = min(t0 + bs, n)
            for j0 in range(0, l, bs):
                j1 = min(j0 + bs, l)
                for i in range(i0, i1):
                    _gemm_row_run(A, B, C, k, i, j0, j1, t0, t1,
                                  acc, x, y, out, buf, t0 == 0)


@njit(cache=True, nogil=True)
def rgemm_blocked_serial(A, B, C, k, bs):
    m = A.shape[1]
    n = A.shape[2]
    l = B.shape[2]
    acc = np.empty(k)
    x = np.empty(k)
    y = np.empty(k)
    out = np.empty(k)
    buf = np.empty(scratch_len(k))
    for i0 in range(0, m, bs):
        i1 = min(i0 + bs, m)
        for t0 in range(0, n, bs):
            t1 = min(t0 + bs, n)
            for j0 in range(0, l, bs):
                j1 = min(j0 + bs, l)
                for i in range(i0, i1):
                    _gemm_row_run(A, B, C, k, i, j0, j1, t0, t1,
                                  acc, x, y, out, buf, t0 == 0)


@njit(cache=True, nogil=True)
def rank1_acc(C, a, b, k):
    """C[:, i, j] += a[:, i] * b[:, j] (outer-product update)."""
    m = C.shape[1]
    n = C.shape[2]
    xa = np.empty(k)
    xb = np.empty(k)
    acc = np.empty(k)
    out = np.empty(k)
    buf = np.empty(scratch_len(k))
    for i in range(m):
        for c in range(k):
            xa[c] = a[c, i]
        for j in range(n):
            for c in range(k):
                xb[c] = b[c, j]
                acc[c] = C[c, i, j]
            exp_mul_core(xa, xb, buf, out, k)
            exp_add_core(acc, out, buf, acc, k)
            for c in range(k):
                C[c, i, j] = acc[c]


# ---------------------------------------------------------------------------
# Ozaki-scheme helpers
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def renorm_planes(R, k):
    """Re-establish the expansion invariant elementwise (after an exact
    leading-plane subtraction has disturbed component ordering)."""
    m = R.shape[1]
    n = R.shape[2]
    for i in prange(m):
        out = np.empty(k)
        buf = np.empty(scratch_len(k))
        for j in range(n):
            for c in range(k):
                buf[c] = R[c, i, j]
            renorm(buf, k, out, k)
            for c in range(k):
                R[c, i, j] = out[c]


@njit(cache=True, parallel=True)
def acc_plane(C, P, k):
    """C += P elementwise, P a plain float64 plane; error-free insertion
    from the least significant component up, then truncation to k."""
    m = C.shape[1]
    n = C.shape[2]
    for i in prange(m):
        h = np.empty(MAX_K + 1)
        for j in range(n):
            q = P[i, j]
            for c in range(k - 1, -1, -1):
                q, e = two_sum(q, C[c, i, j])
                h[c + 1] = e
            h[0] = q
            for c in range(k):
                C[c, i, j] = h[c]


# ---------------------------------------------------------------------------
# Complex helpers on (k,) slices.
#
# Unlike the exp_*_core routines, outputs here must NOT alias inputs; temps
# s1..s3 must be distinct from everything else.
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def cmul_3m_core(ar, ai, br, bi, outr, outi, s1, s2, s3, buf, k):
    exp_mul_core(ar, br, buf, s1, k)        # t1
    exp_mul_core(ai, bi, buf, s2, k)        # t2
    exp_sub_core(s1, s2, buf, outr, k)      # t1 - t2
    exp_add_core(ar, ai, buf, s3, k)
    exp_add_core(br, bi, buf, outi, k)
    exp_mul_core(s3, outi, buf, s3, k)      # (Re a + Im a)(Re b + Im b)
    exp_sub_core(s3, s1, buf, s3, k)
    exp_sub_core(s3, s2, buf, outi, k)


@njit(cache=True, inline="always")
def cmul_4m_core(ar, ai, br, bi, outr, outi, s1, s2, s3, buf, k):
    exp_mul_core(ar, br, buf, s1, k)
    exp_mul_core(ai, bi, buf, s2, k)
    exp_sub_core(s1, s2, buf, outr, k)      # same real-part expression as 3M
    exp_mul_core(ai, br, buf, s1, k)
    exp_mul_core(ar, bi, buf, s2, k)
    exp_add_core(s1, s2, buf, outi, k)


@njit(cache=True, inline="always")
def cdiv_core(ar, ai, br, bi, outr, outi, s1, s2, s3, buf, k):
    exp_mul_core(br, br, buf, s1, k)
    exp_mul_core(bi, bi, buf, s2, k)
    exp_add_core(s1, s2, buf, s1, k)        # d = Re(b)^2 + Im(b)^2
    exp_mul_core(ar, br, buf, s2, k)
    exp_mul_core(ai, bi, buf, s3, k)
    exp_add_core(s2, s3, buf, s2, k)
    exp_mul_core(ai, br, buf, s3, k)
    exp_mul_core(ar, bi, buf, outi, k)
    exp_sub_core(s3, outi, buf, s3, k)
    exp_div_core(s2, s1, buf, outr, k)
    exp_div_core(s3, s1, buf, outi, k)


# ---------------------------------------------------------------------------
# LU kernels (planar complex, in-place)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _pivot_row(re, im, j, k, n):
    """Largest |Re| + |Im| in column j at or below row j; ties keep the
    lowest row.  Returns -1 when the whole pivot column is exactly zero."""
    best = -1
    bs = np.zeros(k)
    cand = np.empty(k)
    t = np.empty(k)
    u = np.empty(k)
    buf = np.empty(scratch_len(k))
    nz = False
    for i in range(j, n):
        for c in range(k):
            t[c] = re[c, i, j]
            u[c] = im[c, i, j]
        exp_abs_core(t, t, k)
        exp_abs_core(u, u, k)
        exp_add_core(t, u, buf, cand, k)
        exp_sub_core(cand, bs, buf, t, k)
        if t[0] > 0.0:
            best = i
            for c in range(k):
                bs[c] = cand[c]
            nz = True
    if not nz:
        return -1
    return best


@njit(cache=True, inline="always")
def _swap_rows(re, im, k, r1, r2, n):
    if r1 == r2:
        return
    for c in range(k):
        for j in range(n):
            tmp = re[c, r1, j]
            re[c, r1, j] = re[c, r2, j]
            re[c, r2, j] = tmp
            tmp = im[c, r1, j]
            im[c, r1, j] = im[c, r2, j]
            im[c, r2, j] = tmp


@njit(cache=True, parallel=True)
def lu_panel(re, im, piv, jb, kw, use3m, k):
    """Right-looking elimination of panel columns [jb, jb+kw).

    Pivot rows are chosen over the full trailing column and swapped across
    the entire matrix, so PA = LU holds literally.  Row updates touch panel
    columns only; calling with jb=0, kw=n is the unblocked factorization.
    Returns -1 on success, else the index of an exactly singular column.
    """
    n = re.shape[1]
    for j in range(jb, jb + kw):
        p = _pivot_row(re, im, j, k, n)
        if p < 0:
            return j
        _swap_rows(re, im, k, j, p, n)
        piv[j] = p
        for i in prange(j + 1, n):
            ar = np.empty(k)
            ai = np.empty(k)
            br = np.empty(k)
            bi = np.empty(k)
            lr = np.empty(k)
            li = np.empty(k)
            pr = np.empty(k)
            pi = np.empty(k)
            s1 = np.empty(k)
            s2 = np.empty(k)
            s3 = np.empty(k)
            buf = np.empty(scratch_len(k))
            for c in range(k):
                ar[c] = re[c, i, j]
                ai[c] = im[c, i, j]
                br[c] = re[c, j, j]
                bi[c] = im[c, j, j]
            cdiv_core(ar, ai, br, bi, lr, li, s1, s2, s3, buf, k)
            for c in range(k):
                re[c, i, j] = lr[c]
                im[c, i, j] = li[c]
            for t in range(j + 1, jb + kw):
                for c in range(k):
                    br[c] = re[c, j, t]
                    bi[c] = im[c, j, t]
                if use3m:
                    cmul_3m_core(lr, li, br, bi, pr, pi, s1, s2, s3, buf, k)
                else:
                    cmul_4m_core(lr, li, br, bi, pr, pi, s1, s2, s3, buf, k)
                for c in range(k):
                    ar[c] = re[c, i, t]
                    ai[c] = im[c, i, t]
                exp_sub_core(ar, pr, buf, ar, k)
                exp_sub_core(ai, pi, buf, ai, k)
                for c in range(k):
                    re[c, i, t] = ar[c]
                    im[c, i, t] = ai[c]
    return -1


@njit(cache=True, parallel=True)
def trsm_ll_unit(lre, lim, are, aim, use3m, k):
    """Solve L X = A in place on A, L unit lower triangular (K x K),
    A of shape (K, M); forward substitution, one column per task."""
    K = lre.shape[1]
    M = are.shape[2]
    for col in prange(M):
        xr = np.empty(k)
        xi = np.empty(k)
        yr = np.empty(k)
        yi = np.empty(k)
        lr = np.empty(k)
        li = np.empty(k)
        pr = np.empty(k)
        pi = np.empty(k)
        s1 = np.empty(k)
        s2 = np.empty(k)
        s3 = np.empty(k)
        buf = np.empty(scratch_len(k))
        for r in range(1, K):
            for c in range(k):
                xr[c] = are[c, r, col]
                xi[c] = aim[c, r, col]
            for s in range(r):
                for c in range(k):
                    lr[c] = lre[c, r, s]
                    li[c] = lim[c, r, s]
                    yr[c] = are[c, s, col]
                    yi[c] = aim[c, s, col]
                if use3m:
                    cmul_3m_core(lr, li, yr, yi, pr, pi, s1, s2, s3, buf, k)
                else:
                    cmul_4m_core(lr, li, yr, yi, pr, pi, s1, s2, s3, buf, k)
                exp_sub_core(xr, pr, buf, xr, k)
                exp_sub_core(xi, pi, buf, xi, k)
            for c in range(k):
                are[c, r, col] = xr[c]
                aim[c, r, col] = xi[c]


@njit(cache=True)
def solve_fb(re, im, piv, br, bi, use3m, k):
    """Forward/backward substitution on factored planes; b overwritten by x."""
    n = re.shape[1]
    for i in range(n):
        p = piv[i]
        if p != i:
            for c in range(k):
                tmp = br[c, i]
                br[c, i] = br[c, p]
                br[c, p] = tmp
                tmp = bi[c, i]
                bi[c, i] = bi[c, p]
                bi[c, p] = tmp
    xr = np.empty(k)
    xi = np.empty(k)
    yr = np.empty(k)
    yi = np.empty(k)
    lr = np.empty(k)
    li = np.empty(k)
    pr = np.empty(k)
    pi = np.empty(k)
    s1 = np.empty(k)
    s2 = np.empty(k)
    s3 = np.empty(k)
    buf = np.empty(scratch_len(k))
    for i in range(1, n):
        for c in range(k):
            xr[c] = br[c, i]
            xi[c] = bi[c, i]
        for j in range(i):
            for c in range(k):
                lr[c] = re[c, i, j]
                li[c] = im[c, i, j]
                yr[c] = br[c, j]
                yi[c] = bi[c, j]
            if use3m:
                cmul_3m_core(lr, li, yr, yi, pr, pi, s1, s2, s3, buf, k)
            else:
                cmul_4m_core(lr, li, yr, yi, pr, pi, s1, s2, s3, buf, k)
            exp_sub_core(xr, pr, buf, xr, k)
            exp_sub_core(xi, pi, buf, xi, k)
        for c in range(k):
            br[c, i] = xr[c]
            bi[c, i] = xi[c]
    for i in range(n - 1, -1, -1):
        for c in range(k):
            xr[c] = br[c, i]
            xi[c] = bi[c, i]
        for j in range(i + 1, n):
            for c in range(k):
                lr[c] = re[c, i, j]
                li[c] = im[c, i, j]
                yr[c] = br[c, j]
                yi[c] = bi[c, j]
            if use3m:
                cmul_3m_core(lr, li, yr, yi, pr, pi, s1, s2, s3, buf, k)
            else:
                cmul_4m_core(lr, li, yr, yi, pr, pi, s1, s2, s3, buf, k)
            exp_sub_core(xr, pr, buf, xr, k)
            exp_sub_core(xi, pi, buf, xi, k)
        for c in range(k):
            lr[c] = re[c, i, i]
            li[c] = im[c, i, i]
        cdiv_core(xr, xi, lr, li, yr, yi, s1, s2, s3, buf, k)
        for c in range(k):
            br[c, i] = yr[c]
            bi[c, i] = yi[c]
