"""LU decomposition: hand cases, reconstruction bounds, blocked/normal
consistency, triangular solves, error metric."""

from fractions import Fraction

import numpy as np
import pytest

from mpclu import (
    ComplexScalar,
    ComplexVector,
    KernelChoice,
    PlanarComplexMatrix,
    RealMatrix,
    SingularMatrixError,
    eps_for,
    lu_blocked,
    lu_normal,
    max_rel_err,
    solve,
    trsm_unit_lower,
)
from mpclu.expansion import Expansion, exp_mul, exp_add
from mpclu.lu import reconstruction_error
from mpclu.bench import gen_problem
from mpclu.rmatrix import random_matrix


def _rand_pc(rng, n, k):
    return PlanarComplexMatrix(random_matrix(n, n, k, rng), random_matrix(n, n, k, rng))


def test_identity_factors():
    I = PlanarComplexMatrix.identity(5, 2)
    f = lu_normal(I)
    assert f.packed.bitwise_equal(I)
    assert np.array_equal(f.pivots, np.arange(5))


def test_hand_2x2_real():
    A = PlanarComplexMatrix(
        RealMatrix.from_float64(np.array([[1.0, 2.0], [3.0, 4.0]]), 2),
        RealMatrix.zeros(2, 2, 2),
    )
    f = lu_normal(A)
    # |3| > |1|: rows swap
    assert list(f.pivots) == [1, 1]
    eps = Fraction(eps_for(2))
    u = f.packed.re_plane
    assert u.at(0, 0).to_fraction() == 3
    assert u.at(0, 1).to_fraction() == 4
    l21 = u.at(1, 0).to_fraction()
    assert abs(l21 - Fraction(1, 3)) <= 2 * eps
    u22 = u.at(1, 1).to_fraction()
    assert abs(u22 - Fraction(2, 3)) <= 4 * eps
    assert np.all(f.packed.im_plane.data == 0.0)


def test_reconstruction_dd_64(rng):
    system, _ = gen_problem(64, 11, "dd")
    f = lu_normal(system.A)
    assert reconstruction_error(f, system.A) <= 64 * eps_for(2) * system.A.max_abs()


def test_reconstruction_td_32(rng):
    system, _ = gen_problem(32, 12, "td")
    for f in (lu_normal(system.A), lu_blocked(system.A, 8)):
        assert reconstruction_error(f, system.A) <= 64 * eps_for(3) * system.A.max_abs()


def test_blocked_full_panel_bitwise(rng):
    for prec in ("dd", "qd"):
        system, _ = gen_problem(24, 13, prec)
        fn = lu_normal(system.A)
        fb = lu_blocked(system.A, 24)
        assert fb.packed.bitwise_equal(fn.packed)
        assert np.array_equal(fb.pivots, fn.pivots)


def test_blocked_identity_any_k():
    I = PlanarComplexMatrix.identity(12, 3)
    for K in (3, 5, 12):
        f = lu_blocked(I, K)
        assert f.packed.bitwise_equal(I)


def test_blocked_ozaki_matches_normal_solution(rng):
    n = 64
    system, x = gen_problem(n, 14, "qd")
    fn = lu_normal(system.A)
    kc = KernelChoice(method="3m", real_kernel="ozaki", d=12)
    fb = lu_blocked(system.A, 16, kc=kc)
    xn = solve(fn, system.b)
    xb = solve(fb, system.b)
    # cross-algorithm agreement at the solution level
    diff = float(max_rel_err(xb, xn))
    assert diff <= 1e3 * n * eps_for(4)


def test_blocked_partial_final_panel(rng):
    system, x = gen_problem(21, 15, "dd")
    f = lu_blocked(system.A, 8)  # 8 + 8 + 5
    assert reconstruction_error(f, system.A) <= 64 * eps_for(2) * system.A.max_abs()


def test_blocked_invalid_K(rng):
    system, _ = gen_problem(8, 16, "dd")
    for K in (0, 9, -1):
        with pytest.raises(ValueError):
            lu_blocked(system.A, K)


def test_trsm_identity_bitwise(rng):
    k = 2
    L = PlanarComplexMatrix.identity(6, k)
    A12 = _rand_pc(rng, 6, k)
    X = trsm_unit_lower(L, A12)
    assert X.bitwise_equal(A12)


def test_trsm_hand_2x2():
    k = 2
    L = PlanarComplexMatrix.identity(2, k)
    L.re_plane.data[0, 1, 0] = 2.0
    A12 = PlanarComplexMatrix(
        RealMatrix.from_float64(np.array([[1.0], [0.0]]), k),
        RealMatrix.zeros(2, 1, k),
    )
    X = trsm_unit_lower(L, A12)
    assert X.re_plane.data[0, 0, 0] == 1.0
    assert X.re_plane.data[0, 1, 0] == -2.0
    assert np.all(X.im_plane.data == 0.0)


def test_trsm_oracle_k16(rng):
    K, M, k = 16, 8, 2
    L = PlanarComplexMatrix.identity(K, k)
    low = rng.uniform(-1, 1, (K, K))
    L.re_plane.data[0] += np.tril(low, -1)
    L.im_plane.data[0] += np.tril(rng.uniform(-1, 1, (K, K)), -1)
    A12 = _rand_pc(rng, K, k)
    A12 = PlanarComplexMatrix(
        RealMatrix(A12.re_plane.data[:, :, :M].copy()),
        RealMatrix(A12.im_plane.data[:, :, :M].copy()),
    )
    X = trsm_unit_lower(L, A12)
    # residual L X - A12 must vanish at working precision
    from mpclu.cmatrix import cgemm
    from mpclu.rmatrix import mat_sub

    R = cgemm(L, X, KernelChoice(method="4m", real_kernel="naive"))
    resid = max(
        mat_sub(R.re_plane, A12.re_plane).max_abs(),
        mat_sub(R.im_plane, A12.im_plane).max_abs(),
    )
    scale = max(L.max_abs() * X.max_abs(), 1.0)
    assert resid <= 32 * K * eps_for(k) * scale


def test_solve_identity_bitwise(rng):
    k = 2
    I = PlanarComplexMatrix.identity(7, k)
    f = lu_normal(I)
    b = ComplexVector(rng.random((k, 7)), rng.random((k, 7)))
    from mpclu import _kernels as _kk

    _kk.renorm_planes(b.re.reshape(k, 7, 1), k)
    _kk.renorm_planes(b.im.reshape(k, 7, 1), k)
    x = solve(f, b)
    assert x.bitwise_equal(b)


def test_solve_hand_2x2():
    k = 2
    A = PlanarComplexMatrix.from_complex128(np.array([[1.0, 1.0], [0.0, 1.0]]), k)
    xs = [ComplexScalar.from_complex(1 + 2j, k), ComplexScalar.from_complex(3 + 4j, k)]
    b = ComplexVector.from_scalars(
        [ComplexScalar.from_complex(4 + 6j, k), ComplexScalar.from_complex(3 + 4j, k)]
    )
    f = lu_normal(A)
    x = solve(f, b)
    assert x.at(0).to_complex() == 1 + 2j
    assert x.at(1).to_complex() == 3 + 4j


def test_solve_benchmark_dd_64(rng):
    system, x = gen_problem(64, 17, "dd")
    f = lu_normal(system.A)
    err = float(max_rel_err(solve(f, system.b), x))
    assert 0 < err < 1e4 * eps_for(2) * 64


def test_singular_zero_matrix():
    Z = PlanarComplexMatrix.zeros(4, 4, 2)
    with pytest.raises(SingularMatrixError, match="column 0"):
        lu_normal(Z)


def test_singular_dependent_columns():
    # second column is an exact multiple of the first
    base = np.array([[1.0, 2.0, 1.0], [2.0, 4.0, 0.0], [3.0, 6.0, 2.0]])
    A = PlanarComplexMatrix(RealMatrix.from_float64(base, 2), RealMatrix.zeros(3, 3, 2))
    with pytest.raises(SingularMatrixError, match="column 1"):
        lu_normal(A)


def test_max_rel_err_examples():
    k = 3
    xs = [ComplexScalar.from_complex(1 + 1j, k), ComplexScalar.from_complex(2 - 1j, k)]
    x = ComplexVector.from_scalars(xs)
    assert float(max_rel_err(x, x)) == 0.0
    doubled = x.copy()
    doubled.set_at(1, ComplexScalar.from_complex(4 - 2j, k))
    assert float(max_rel_err(doubled, x)) == 1.0


def test_max_rel_err_uniform_scaling():
    k = 3
    xs = [ComplexScalar.from_complex(3 + 4j, k), ComplexScalar.from_complex(-1 + 2j, k)]
    x = ComplexVector.from_scalars(xs)
    delta = 1e-30
    scale = exp_add(Expansion.from_float(1.0, k), Expansion.from_float(delta, k))
    xh = ComplexVector.zeros(2, k)
    for i in range(2):
        z = x.at(i)
        xh.set_at(i, ComplexScalar(exp_mul(z.re, scale), exp_mul(z.im, scale)))
    err = float(max_rel_err(xh, x))
    assert abs(err - delta) <= 1e-6 * delta


def test_max_rel_err_zero_component_raises():
    k = 2
    x = ComplexVector.zeros(2, k)
    x.set_at(0, ComplexScalar.from_complex(1 + 1j, k))
    with pytest.raises(ValueError, match="zero true component"):
        max_rel_err(x, x)


def test_pivot_growth_sane(rng):
    system, _ = gen_problem(64, 18, "dd")
    f = lu_normal(system.A)
    U = f.upper()
    assert U.max_abs() <= 16 * system.A.max_abs()


def test_pivot_indices_lower_bounded(rng):
    system, _ = gen_problem(32, 19, "dd")
    f = lu_normal(system.A)
    assert np.all(f.pivots >= np.arange(32))


def test_thread_invariance_both_variants(rng):
    system, _ = gen_problem(24, 20, "dd")
    fn1 = lu_normal(system.A, threads=1)
    kc = KernelChoice(method="3m", real_kernel="blocked")
    fb1 = lu_blocked(system.A, 8, kc=kc, threads=1)
    for t in (2, 8):
        fnt = lu_normal(system.A, threads=t)
        assert fnt.packed.bitwise_equal(fn1.packed)
        fbt = lu_blocked(system.A, 8, kc=kc, threads=t)
        assert fbt.packed.bitwise_equal(fb1.packed)


def test_elimination_method_switch(rng):
    system, _ = gen_problem(16, 21, "dd")
    f3 = lu_normal(system.A, method="3m")
    f4 = lu_normal(system.A, method="4m")
    # same pivots, slightly different rounding paths
    assert np.array_equal(f3.pivots, f4.pivots)
    assert reconstruction_error(f4, system.A) <= 64 * eps_for(2) * system.A.max_abs()
