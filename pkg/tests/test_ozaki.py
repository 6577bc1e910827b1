"""Ozaki scheme: grid-aligned splitting, exactness of the binary64 part
products, accuracy as a function of the division count."""

from fractions import Fraction

import numpy as np
import pytest

from mpclu import (
    RealMatrix,
    eps_for,
    ozaki_split,
    rgemm_naive,
    rgemm_ozaki,
    split_exactness_bound,
)
from mpclu.ozaki import DEFAULT_SPLIT_BITS
from mpclu.rmatrix import random_matrix


def test_exactness_bound_values():
    assert split_exactness_bound(1) == 26
    assert split_exactness_bound(256) == 22
    assert split_exactness_bound(1024) == 21


def test_split_all_ones():
    A = RealMatrix.from_float64(np.ones((8, 8)), 2)
    st = ozaki_split(A, 4)
    assert np.array_equal(st.parts[0], np.ones((8, 8)))
    for p in st.parts[1:]:
        assert np.all(p == 0.0)


def test_split_single_on_grid_matrix_exact():
    # entries representable in the split width reproduce exactly at d=1
    rng = np.random.default_rng(5)
    vals = rng.integers(1, 2 ** 10, size=(8, 8)).astype(float) / 16.0
    A = RealMatrix.from_float64(vals, 2)
    st = ozaki_split(A, 1)
    assert np.array_equal(st.parts[0], vals)


def test_split_reconstruction(rng):
    A = random_matrix(8, 8, 2, rng)
    st = ozaki_split(A, 6)
    eps = Fraction(eps_for(2))
    for i in range(8):
        for j in range(8):
            exact = A.at(i, j).to_fraction()
            got = sum(Fraction(float(p[i, j])) for p in st.parts)
            assert abs(got - exact) <= eps * max(abs(exact), Fraction(1, 2 ** 40))


def test_split_parts_are_grid_integers(rng):
    A = random_matrix(12, 10, 3, rng)
    st = ozaki_split(A, 5)
    for p, part in enumerate(st.parts):
        unit = st.scales[p][:, None]  # row grids for a left split
        with np.errstate(invalid="ignore"):
            q = np.where(unit > 0, part / np.where(unit > 0, unit, 1.0), 0.0)
        assert np.array_equal(q, np.round(q))
        assert np.all(np.abs(q) <= 2.0 ** st.width)


def test_split_budget_errors():
    A = RealMatrix.zeros(4, 4, 2)
    with pytest.raises(ValueError, match="split exactness budget"):
        ozaki_split(A, 2, split_bits=30)
    with pytest.raises(ValueError):
        ozaki_split(A, 0)
    with pytest.raises(ValueError):
        ozaki_split(A, 2, side="up")


def test_pairwise_products_exact_rational(rng):
    """Each scheduled binary64 part product must be bitwise the exact one."""
    n = 8
    A = random_matrix(n, n, 2, rng)
    B = random_matrix(n, n, 2, rng)
    sa = ozaki_split(A, 4, "left")
    sb = ozaki_split(B, 4, "right")
    for p in range(4):
        for q in range(4 - p):
            P = sa.parts[p] @ sb.parts[q]
            for i in range(n):
                for j in range(n):
                    exact = sum(
                        Fraction(float(sa.parts[p][i, t])) * Fraction(float(sb.parts[q][t, j]))
                        for t in range(n)
                    )
                    assert Fraction(float(P[i, j])) == exact


def test_ozaki_small_integers_exact():
    rng = np.random.default_rng(3)
    a = rng.integers(-50, 50, size=(6, 6)).astype(float)
    b = rng.integers(-50, 50, size=(6, 6)).astype(float)
    A = RealMatrix.from_float64(a, 2)
    B = RealMatrix.from_float64(b, 2)
    C = rgemm_ozaki(A, B, 2)
    assert np.array_equal(C.data[0], a @ b)
    assert np.all(C.data[1] == 0.0)


def _value_diff(C, ref):
    """max |C - ref| at full precision (leading plane of the difference)."""
    from mpclu import mat_sub

    kc, kr = C.k, ref.k
    if kc < kr:
        C = C.promote(kr)
    elif kr < kc:
        ref = ref.promote(kc)
    return mat_sub(C, ref).max_abs()


def test_ozaki_dd_d6_matches_naive(rng):
    n = 128
    A = random_matrix(n, n, 2, rng)
    B = random_matrix(n, n, 2, rng)
    ref = rgemm_naive(A, B)
    scale = n * A.max_abs() * B.max_abs()
    err6 = _value_diff(rgemm_ozaki(A, B, 6), ref)
    err5 = _value_diff(rgemm_ozaki(A, B, 5), ref)
    assert err6 <= n * eps_for(2) * scale
    assert err5 > 10 * max(err6, eps_for(2) * scale / n)


def test_ozaki_qd_d12_full_accuracy(rng):
    n = 64
    A = random_matrix(n, n, 4, rng)
    B = random_matrix(n, n, 4, rng)
    # reference: the same product at k = 8
    A8 = RealMatrix(np.concatenate([A.data, np.zeros((4, n, n))]))
    B8 = RealMatrix(np.concatenate([B.data, np.zeros((4, n, n))]))
    ref = rgemm_naive(A8, B8)
    scale = n * A.max_abs() * B.max_abs()
    err12 = _value_diff(rgemm_ozaki(A, B, 12), ref)
    err11 = _value_diff(rgemm_ozaki(A, B, 11), ref)
    assert err12 <= 4 * n * eps_for(4) * scale
    assert err11 > 4 * err12


def test_ozaki_error_monotone_in_d(rng):
    n = 48
    A = random_matrix(n, n, 2, rng)
    B = random_matrix(n, n, 2, rng)
    ref = rgemm_naive(A, B)
    scale = n * A.max_abs() * B.max_abs()
    floor = 4 * eps_for(2) * scale
    prev = None
    for d in range(1, 9):
        err = _value_diff(rgemm_ozaki(A, B, d), ref)
        if prev is not None:
            # strictly non-increasing until both sit on the precision floor
            assert err <= prev or (err <= floor and prev <= floor)
        prev = err


def test_ozaki_deterministic_and_kernel_agnostic(rng):
    n = 24
    A = random_matrix(n, n, 2, rng)
    B = random_matrix(n, n, 2, rng)
    ref = rgemm_ozaki(A, B, 6)
    for t in (1, 2, 8):
        assert rgemm_ozaki(A, B, 6, threads=t).bitwise_equal(ref)

    def plain_gemm(X, Y):
        # deliberately different schedule: exactness makes it bit-identical
        out = np.zeros((X.shape[0], Y.shape[1]))
        for j in range(Y.shape[1]):
            out[:, j] = (X * Y[:, j][None, :]).sum(axis=1)
        return out

    assert rgemm_ozaki(A, B, 6, f64_gemm=plain_gemm).bitwise_equal(ref)


def test_default_widths_respect_bound():
    for k, w in DEFAULT_SPLIT_BITS.items():
        assert w <= split_exactness_bound(1024)
        assert w >= 16
