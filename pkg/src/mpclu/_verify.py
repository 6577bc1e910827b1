"""Programmatic invariant suites behind `mpclu verify`.

Each check prints one PASS/FAIL line; run_suite returns the failure count.
These are quick smoke-level versions of the full test suite, usable on an
installed package without pytest.
"""

from fractions import Fraction

import numpy as np

from .cmatrix import KernelChoice, PlanarComplexMatrix, cgemm
from .cscalar import ComplexScalar, cdiv, cmul_3m, cmul_4m
from .eft import two_prod, two_sum
from .expansion import Expansion, eps_for, exp_add, exp_mul, nonoverlapping, renormalize
from .lu import lu_blocked, lu_normal, max_rel_err, reconstruction_error, solve
from .bench import gen_problem
from .rmatrix import random_matrix
from .rgemm import rgemm_blocked, rgemm_naive, rgemm_strassen
from .ozaki import rgemm_ozaki


def _report(name, ok):
    print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return 0 if ok else 1


def _rand_scalar(rng, k):
    comps = [rng.uniform(-1, 1)]
    for i in range(1, k):
        comps.append(rng.uniform(-1, 1) * abs(comps[0]) * 2.0 ** (-52 * i))
    return renormalize(comps, k)


def _suite_eft(seed):
    rng = np.random.default_rng(seed)
    fails = 0
    ok = True
    for _ in range(20000):
        a = rng.uniform(-1, 1) * 2.0 ** rng.integers(-300, 300)
        b = rng.uniform(-1, 1) * 2.0 ** rng.integers(-300, 300)
        s, e = two_sum(a, b)
        if Fraction(s) + Fraction(e) != Fraction(a) + Fraction(b):
            ok = False
            break
        p, e = two_prod(a, b)
        if Fraction(p) + Fraction(e) != Fraction(a) * Fraction(b):
            ok = False
            break
    fails += _report("two_sum/two_prod exact on 2e4 samples", ok)
    ok = True
    for _ in range(2000):
        raw = [rng.uniform(-1, 1) * 2.0 ** rng.integers(-60, 60) for _ in range(6)]
        x = renormalize(raw, 4)
        if not nonoverlapping(x.components):
            ok = False
            break
    fails += _report("renormalize output nonoverlapping", ok)
    ok = True
    for k in (2, 3, 4):
        for _ in range(500):
            x = _rand_scalar(rng, k)
            y = _rand_scalar(rng, k)
            if exp_add(x, y) != exp_add(y, x) or exp_mul(x, y) != exp_mul(y, x):
                ok = False
    fails += _report("add/mul bitwise commutative", ok)
    return fails


def _suite_scalar(seed):
    rng = np.random.default_rng(seed)
    fails = 0
    for k in (2, 3, 4):
        eps = eps_for(k)
        worst = 0.0
        re_equal = True
        for _ in range(1000):
            a = ComplexScalar(_rand_scalar(rng, k), _rand_scalar(rng, k))
            b = ComplexScalar(_rand_scalar(rng, k), _rand_scalar(rng, k))
            p3 = cmul_3m(a, b)
            p4 = cmul_4m(a, b)
            re_equal &= p3.re == p4.re
            scale = max(abs(a.to_complex()) * abs(b.to_complex()), 1e-300)
            for u, v in ((p3.re, p4.re), (p3.im, p4.im)):
                worst = max(worst, abs(float(u - v)) / scale)
        fails += _report(f"k={k}: |3M-4M| <= 8 eps_k (got {worst:.2e})", worst <= 8 * eps)
        fails += _report(f"k={k}: 3M/4M real parts bitwise equal", re_equal)
        ok = True
        for _ in range(200):
            a = ComplexScalar(_rand_scalar(rng, k), _rand_scalar(rng, k))
            b = ComplexScalar(_rand_scalar(rng, k), _rand_scalar(rng, k))
            if b.is_zero():
                continue
            r = cdiv(cmul_3m(a, b), b)
            num = abs((r.re - a.re).to_fraction()) + abs((r.im - a.im).to_fraction())
            den = abs(a.re.to_fraction()) + abs(a.im.to_fraction()) + Fraction(1, 10**40)
            if num / den > 32 * Fraction(eps):
                ok = False
        fails += _report(f"k={k}: cdiv(cmul(a,b),b) ~= a within 32 eps_k", ok)
    return fails


def _suite_matmul(seed):
    rng = np.random.default_rng(seed)
    fails = 0
    n = 32
    for k in (2, 3):
        eps = eps_for(k)
        A = random_matrix(n, n, k, rng)
        B = random_matrix(n, n, k, rng)
        ref = rgemm_naive(A, B)
        scale = n * A.max_abs() * B.max_abs()
        fails += _report(
            f"k={k}: blocked bitwise equals naive",
            rgemm_blocked(A, B, block=8).bitwise_equal(ref),
        )
        ds = (rgemm_strassen(A, B, threshold=8).data[0] - ref.data[0])
        fails += _report(
            f"k={k}: strassen within 32 n eps of naive",
            float(np.abs(ds).max()) <= 32 * n * eps * scale,
        )
        do = (rgemm_ozaki(A, B, 6 if k == 2 else 8).data[0] - ref.data[0])
        fails += _report(
            f"k={k}: ozaki within n eps of naive",
            float(np.abs(do).max()) <= n * eps * scale,
        )
        outs = [rgemm_naive(A, B, threads=t) for t in (1, 2, 8)]
        fails += _report(
            f"k={k}: thread-count invariance",
            outs[0].bitwise_equal(outs[1]) and outs[1].bitwise_equal(outs[2]),
        )
    return fails


def _suite_lu(seed):
    fails = 0
    n = 48
    for prec in ("dd", "qd"):
        system, x = gen_problem(n, seed, prec)
        k = system.A.k
        eps = eps_for(k)
        f = lu_normal(system.A)
        resid = reconstruction_error(f, system.A)
        fails += _report(
            f"{prec}: PA=LU within 64 eps max|A| (got {resid:.2e})",
            resid <= 64 * eps * system.A.max_abs(),
        )
        fb = lu_blocked(system.A, n)
        fails += _report(
            f"{prec}: blocked(K=n) bitwise equals normal",
            fb.packed.bitwise_equal(f.packed) and np.array_equal(fb.pivots, f.pivots),
        )
        err = float(max_rel_err(solve(f, system.b), x))
        fails += _report(
            f"{prec}: solve error vs true x below 1e4 n eps (got {err:.2e})",
            err <= 1e4 * n * eps,
        )
    return fails


_SUITES = {
    "eft": _suite_eft,
    "scalar": _suite_scalar,
    "matmul": _suite_matmul,
    "lu": _suite_lu,
}


def run_suite(name, seed=1):
    return _SUITES[name](seed)
