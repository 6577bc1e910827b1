"""Real matrix kernels: naive/blocked/strassen value contracts, schedule
determinism, elementwise add/sub."""

from fractions import Fraction

import numpy as np
import pytest

from mpclu import (
    RealMatrix,
    eps_for,
    mat_add,
    mat_sub,
    rgemm_blocked,
    rgemm_naive,
    rgemm_strassen,
)
from mpclu.expansion import exp_add, exp_mul
from mpclu.rmatrix import random_matrix


def _frac_matmul(A, B):
    """Exact rational product of two expansion matrices (small sizes)."""
    m, n, l = A.rows, A.cols, B.cols
    out = [[Fraction(0)] * l for _ in range(m)]
    fa = [[A.at(i, t).to_fraction() for t in range(n)] for i in range(m)]
    fb = [[B.at(t, j).to_fraction() for j in range(l)] for t in range(n)]
    for i in range(m):
        for j in range(l):
            s = Fraction(0)
            for t in range(n):
                s += fa[i][t] * fb[t][j]
            out[i][j] = s
    return out


def test_naive_identity_bitwise(rng):
    for k in (2, 3, 4):
        A = random_matrix(9, 9, k, rng)
        I = RealMatrix.identity(9, k)
        assert rgemm_naive(I, A).bitwise_equal(A)
        assert rgemm_naive(A, I).bitwise_equal(A)


def test_naive_exact_integers():
    A = RealMatrix.from_float64(np.array([[1.0, 2.0], [3.0, 4.0]]), 2)
    B = RealMatrix.from_float64(np.array([[5.0, 6.0], [7.0, 8.0]]), 2)
    C = rgemm_naive(A, B)
    assert np.array_equal(C.data[0], [[19.0, 22.0], [43.0, 50.0]])
    assert np.all(C.data[1] == 0.0)


def test_naive_oracle_8x8_dd(rng):
    A = random_matrix(8, 8, 2, rng)
    B = random_matrix(8, 8, 2, rng)
    C = rgemm_naive(A, B)
    exact = _frac_matmul(A, B)
    tol = 8 * 4 * Fraction(eps_for(2))
    for i in range(8):
        for j in range(8):
            e = exact[i][j]
            got = C.at(i, j).to_fraction()
            if e == 0:
                continue
            assert abs(got - e) / abs(e) <= tol


def test_naive_shape_mismatch():
    A = RealMatrix.zeros(3, 4, 2)
    B = RealMatrix.zeros(5, 3, 2)
    with pytest.raises(ValueError):
        rgemm_naive(A, B)


def test_blocked_equals_naive_bitwise(rng):
    for k in (2, 3):
        A = random_matrix(24, 24, k, rng)
        B = random_matrix(24, 24, k, rng)
        ref = rgemm_naive(A, B)
        for block in (1, 5, 16, 24, 100):
            assert rgemm_blocked(A, B, block=block).bitwise_equal(ref)


def test_blocked_identity(rng):
    A = random_matrix(17, 17, 2, rng)
    I = RealMatrix.identity(17, 2)
    assert rgemm_blocked(I, A, block=4).bitwise_equal(A)


def test_blocked_td_against_naive_tolerance(rng):
    # bitwise equality is the stronger property; the stated numeric bound
    # must hold a fortiori
    n = 64
    A = random_matrix(n, n, 3, rng)
    B = random_matrix(n, n, 3, rng)
    ref = rgemm_naive(A, B)
    C = rgemm_blocked(A, B, block=16)
    scale = n * A.max_abs() * B.max_abs()
    assert float(np.abs(C.data[0] - ref.data[0]).max()) <= 2 * n * 4 * eps_for(3) * scale
    assert C.bitwise_equal(ref)


def test_strassen_identity(rng):
    n = 16
    A = random_matrix(n, n, 2, rng)
    I = RealMatrix.identity(n, 2)
    C = rgemm_strassen(I, A, threshold=4)
    scale = n * A.max_abs()
    assert float(np.abs(C.data[0] - A.data[0]).max()) <= 32 * n * eps_for(2) * scale


def test_strassen_exact_small_integers(rng):
    ints = rng.integers(-2 ** 20 + 1, 2 ** 20, size=(4, 4)).astype(float)
    jnts = rng.integers(-2 ** 20 + 1, 2 ** 20, size=(4, 4)).astype(float)
    A = RealMatrix.from_float64(ints, 2)
    B = RealMatrix.from_float64(jnts, 2)
    C = rgemm_strassen(A, B, threshold=2)
    exact = ints @ jnts  # exact in binary64: |entries| < 2^43
    assert np.array_equal(C.data[0], exact)
    assert np.all(C.data[1] == 0.0)


def test_strassen_against_naive_128_dd(rng):
    n = 128
    A = random_matrix(n, n, 2, rng)
    B = random_matrix(n, n, 2, rng)
    ref = rgemm_naive(A, B)
    C = rgemm_strassen(A, B, threshold=32)
    scale = n * A.max_abs() * B.max_abs()
    assert float(np.abs(C.data[0] - ref.data[0]).max()) <= 32 * n * eps_for(2) * scale


def test_strassen_odd_sizes_peeling(rng):
    for n in (7, 33):
        A = random_matrix(n, n, 2, rng)
        B = random_matrix(n, n, 2, rng)
        ref = rgemm_naive(A, B)
        C = rgemm_strassen(A, B, threshold=4)
        scale = n * A.max_abs() * B.max_abs()
        assert float(np.abs(C.data[0] - ref.data[0]).max()) <= 32 * n * eps_for(2) * scale


def test_strassen_rejects_non_square():
    A = RealMatrix.zeros(4, 6, 2)
    B = RealMatrix.zeros(6, 4, 2)
    with pytest.raises(ValueError):
        rgemm_strassen(A, B)
    with pytest.raises(ValueError):
        rgemm_strassen(RealMatrix.zeros(4, 4, 2), RealMatrix.zeros(4, 4, 2), threshold=1)


def test_mat_add_identity_and_cancel(rng):
    A = random_matrix(10, 12, 3, rng)
    Z = RealMatrix.zeros(10, 12, 3)
    assert mat_add(A, Z).bitwise_equal(A)
    D = mat_sub(A, A)
    assert np.all(D.data == 0.0)


def test_mat_add_matches_scalar_op(rng):
    A = random_matrix(6, 5, 4, rng)
    B = random_matrix(6, 5, 4, rng)
    C = mat_add(A, B)
    D = mat_sub(A, B)
    for i in range(6):
        for j in range(5):
            assert C.at(i, j) == exp_add(A.at(i, j), B.at(i, j))
            assert D.at(i, j) == exp_add(A.at(i, j), -B.at(i, j))


def test_mat_add_shape_mismatch():
    with pytest.raises(ValueError):
        mat_add(RealMatrix.zeros(3, 3, 2), RealMatrix.zeros(3, 4, 2))


def test_kernels_deterministic_across_threads_and_runs(rng):
    n = 32
    A = random_matrix(n, n, 2, rng)
    B = random_matrix(n, n, 2, rng)
    for kernel in (
        lambda t: rgemm_naive(A, B, threads=t),
        lambda t: rgemm_blocked(A, B, block=8, threads=t),
        lambda t: rgemm_strassen(A, B, threshold=8, threads=t),
    ):
        ref = kernel(1)
        for t in (1, 2, 8):
            assert kernel(t).bitwise_equal(ref)


def test_gemm_outputs_satisfy_expansion_invariant(rng):
    from mpclu import nonoverlapping

    A = random_matrix(12, 12, 3, rng)
    B = random_matrix(12, 12, 3, rng)
    C = rgemm_naive(A, B)
    for i in range(12):
        for j in range(12):
            assert nonoverlapping(C.data[:, i, j])
