"""Benchmark protocol: problem generation, reference solutions, sweeps,
CSV emission.

Problems follow the standard setup for this family of benchmarks: A has
uniform [0, 1] random real and imaginary parts, the true solution is
x_k = k + k i (1-based), and b := A x is computed at reference precision
(k = 8 expansions, ~424 bits, at least twice the widest working precision)
and rounded to the working precision.

Randomness comes from numpy's Philox, a named 64-bit counter-based
generator keyed by the seed.  Entries are drawn in a fixed order: the real
plane row-major (draw number i*n + j), then the imaginary plane (draws
n*n + i*n + j), so any entry can also be regenerated independently by
advancing the counter, and identical seeds give bitwise-identical
problems.

The harness itself is single-threaded; thread counts are passed down into
kernels, and no two cases ever run concurrently (clean timing).  Error
fields depend only on the seed and configuration, never on threads.
"""

import csv
import hashlib
import statistics
import time
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np

from .cmatrix import DEFAULT_SPLITS, KernelChoice, PlanarComplexMatrix, cgemm_4m
from .expansion import PRECISIONS, Expansion, eps_for, exp_to_string
from .lu import (
    ComplexVector,
    LinearSystem,
    SingularMatrixError,
    lu_blocked,
    lu_normal,
    max_rel_err,
    reconstruction_error,
    solve,
)
from .rgemm import DEFAULT_BLOCK, DEFAULT_THRESHOLD
from .rmatrix import RealMatrix

REFERENCE_K = 8

CSV_COLUMNS = [
    "precision",
    "algorithm",
    "method",
    "kernel",
    "n",
    "K",
    "splits",
    "threads",
    "rep_median_seconds",
    "max_relerr",
    "seed",
    "status",
]


def _resolve_k(precision):
    if isinstance(precision, str):
        try:
            return PRECISIONS[precision.lower()]
        except KeyError:
            raise ValueError(f"unknown precision {precision!r}") from None
    k = int(precision)
    if k < 2:
        raise ValueError("precision must name dd/td/qd or give k >= 2")
    return k


def _precision_name(k):
    for name, kk in PRECISIONS.items():
        if kk == k:
            return name
    return f"k{k}"


@dataclass
class BenchConfig:
    precision: str = "dd"
    algorithm: str = "blocked"          # normal | blocked
    method: str = "3m"                  # 3m | 4m
    kernel: str = "ozaki"               # naive | blocked | strassen | ozaki
    n: int = 256
    seed: int = 1
    k_values: List[int] = field(default_factory=list)   # empty: default sweep
    splits: Optional[int] = None
    block: int = DEFAULT_BLOCK
    threshold: int = DEFAULT_THRESHOLD
    threads: List[int] = field(default_factory=lambda: [1])
    reps: int = 3
    verify: bool = False

    def validate(self):
        _resolve_k(self.precision)
        if self.algorithm not in ("normal", "blocked"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.reps < 1:
            raise ValueError("repetitions must be >= 1")
        if self.splits is not None and self.splits < 1:
            raise ValueError("splits must be >= 1")
        for K in self.k_values:
            if not 1 <= K <= self.n:
                raise ValueError(f"K={K} outside [1, {self.n}]")
        for t in self.threads:
            if t < 1:
                raise ValueError("thread counts must be >= 1")
        self.kernel_choice().validate()
        return self

    def kernel_choice(self):
        return KernelChoice(
            method=self.method,
            real_kernel=self.kernel,
            block=self.block,
            threshold=self.threshold,
            d=self.splits,
        )

    def sweep(self):
        """K values to run: the explicit list, or 32..n step 32 (plus a
        final partial panel value of n when n < 32) for blocked runs;
        normal runs use the single panel K = n."""
        if self.algorithm == "normal":
            return [self.n]
        if self.k_values:
            return list(self.k_values)
        if self.n < 32:
            return [self.n]
        return list(range(32, self.n + 1, 32))

    def effective_splits(self, k):
        return self.splits if self.splits is not None else DEFAULT_SPLITS.get(k, 8)


@dataclass
class BenchRecord:
    precision: str
    algorithm: str
    method: str
    kernel: str
    n: int
    K: int
    splits: int
    threads: int
    rep_median_seconds: float
    max_relerr: str
    seed: int
    status: str
    run_id: str = ""

    def row(self):
        return [
            self.precision,
            self.algorithm,
            self.method,
            self.kernel,
            str(self.n),
            str(self.K),
            str(self.splits),
            str(self.threads),
            repr(self.rep_median_seconds),
            self.max_relerr,
            str(self.seed),
            self.status,
        ]


def gen_problem(n, seed, precision):
    """Seeded benchmark system: returns (LinearSystem, true solution x)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = _resolve_k(precision)
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    re = RealMatrix.from_float64(rng.random((n, n)), k)
    im = RealMatrix.from_float64(rng.random((n, n)), k)
    A = PlanarComplexMatrix(re, im)
    x = ComplexVector.zeros(n, k)
    idx = np.arange(1, n + 1, dtype=np.float64)
    x.re[0] = idx
    x.im[0] = idx
    b = reference_rhs(A, x)
    return LinearSystem(A=A, b=b), x


def _plane_as_matrix(v):
    return RealMatrix(np.ascontiguousarray(v.re.reshape(v.k, v.n, 1))), RealMatrix(
        np.ascontiguousarray(v.im.reshape(v.k, v.n, 1))
    )


def reference_rhs(A, x):
    """b := A x evaluated with every operand widened to k = 8 expansions
    (exact widening), naive inner products, then rounded back to the
    working precision."""
    if x.n != A.cols or x.k != A.k:
        raise ValueError("x does not match A")
    k = A.k
    A8 = PlanarComplexMatrix(A.re_plane.promote(REFERENCE_K), A.im_plane.promote(REFERENCE_K))
    xre, xim = _plane_as_matrix(x)
    X8 = PlanarComplexMatrix(xre.promote(REFERENCE_K), xim.promote(REFERENCE_K))
    B8 = cgemm_4m(A8, X8, KernelChoice(method="4m", real_kernel="naive", threads=8))
    bre = B8.re_plane.truncate(k)
    bim = B8.im_plane.truncate(k)
    n = A.rows
    return ComplexVector(bre.data.reshape(k, n), bim.data.reshape(k, n))


def _run_id(cfg, K, threads):
    h = hashlib.sha1(
        f"{cfg!r}|{K}|{threads}|{time.time_ns()}".encode()
    ).hexdigest()
    return h[:12]


def run_bench(cfg):
    """Execute the configured sweep; one record per (K, threads) pair.

    Every repetition times factorize + solve only (problem generation and
    error evaluation excluded); the recorded time is the median.  A
    singular matrix marks the record "singular" and the sweep continues.
    """
    cfg.validate()
    k = _resolve_k(cfg.precision)
    system, x_true = gen_problem(cfg.n, cfg.seed, cfg.precision)
    records = []
    d = cfg.effective_splits(k)
    eps = eps_for(k)
    for K in cfg.sweep():
        kc = cfg.kernel_choice()
        for t in cfg.threads:
            times = []
            status = "ok"
            err_str = "nan"
            factors = None
            xhat = None
            for _ in range(cfg.reps):
                t0 = time.perf_counter()
                try:
                    if cfg.algorithm == "normal":
                        factors = lu_normal(system.A, threads=t, method=cfg.method)
                    else:
                        factors = lu_blocked(system.A, K, kc=kc, threads=t)
                    xhat = solve(factors, system.b)
                except SingularMatrixError:
                    status = "singular"
                times.append(time.perf_counter() - t0)
                if status != "ok":
                    break
            if status == "ok":
                err_str = exp_to_string(max_rel_err(xhat, x_true), 17)
                if cfg.verify:
                    resid = reconstruction_error(factors, system.A)
                    if resid > 64.0 * eps * system.A.max_abs():
                        status = "verify_failed"
            records.append(
                BenchRecord(
                    precision=_precision_name(k),
                    algorithm=cfg.algorithm,
                    method=cfg.method,
                    kernel=cfg.kernel,
                    n=cfg.n,
                    K=K,
                    splits=d,
                    threads=t,
                    rep_median_seconds=statistics.median(times),
                    max_relerr=err_str,
                    seed=cfg.seed,
                    status=status,
                    run_id=_run_id(cfg, K, t),
                )
            )
    return records


def run_matmul_bench(cfg, check=False):
    """Complex matmul timing over the same kernel axes: C = A B on two
    seeded random matrices.  With check=True the result is compared
    against the k = 8 reference (naive kernel) and the componentwise
    maximum relative error recorded; otherwise the error field is nan."""
    cfg.validate()
    k = _resolve_k(cfg.precision)
    n = cfg.n
    rng = np.random.Generator(np.random.Philox(key=np.uint64(cfg.seed)))
    A = PlanarComplexMatrix(
        RealMatrix.from_float64(rng.random((n, n)), k),
        RealMatrix.from_float64(rng.random((n, n)), k),
    )
    B = PlanarComplexMatrix(
        RealMatrix.from_float64(rng.random((n, n)), k),
        RealMatrix.from_float64(rng.random((n, n)), k),
    )
    from .cmatrix import cgemm

    records = []
    d = cfg.effective_splits(k)
    for t in cfg.threads:
        kc = cfg.kernel_choice().with_threads(t)
        times = []
        C = None
        for _ in range(cfg.reps):
            t0 = time.perf_counter()
            C = cgemm(A, B, kc)
            times.append(time.perf_counter() - t0)
        err_str = "nan"
        if check:
            err_str = exp_to_string(
                Expansion.from_float(_matmul_check(A, B, C), k), 17
            )
        records.append(
            BenchRecord(
                precision=_precision_name(k),
                algorithm="matmul",
                method=cfg.method,
                kernel=cfg.kernel,
                n=n,
                K=0,
                splits=d,
                threads=t,
                rep_median_seconds=statistics.median(times),
                max_relerr=err_str,
                seed=cfg.seed,
                status="ok",
            )
        )
    return records


def _matmul_check(A, B, C):
    """Max componentwise relative error of C against the k=8 reference."""
    from .rmatrix import mat_sub

    A8 = PlanarComplexMatrix(A.re_plane.promote(REFERENCE_K), A.im_plane.promote(REFERENCE_K))
    B8 = PlanarComplexMatrix(B.re_plane.promote(REFERENCE_K), B.im_plane.promote(REFERENCE_K))
    R = cgemm_4m(A8, B8, KernelChoice(method="4m", real_kernel="blocked", threads=8))
    worst = 0.0
    for plane_c, plane_r in ((C.re_plane, R.re_plane), (C.im_plane, R.im_plane)):
        D = mat_sub(plane_c.promote(REFERENCE_K), plane_r, threads=8)
        denom = np.maximum(np.abs(plane_r.data[0]), np.finfo(float).tiny)
        worst = max(worst, float((np.abs(D.data[0]) / denom).max()))
    return worst


def emit_csv(records, path):
    """Header plus one fixed-order row per record."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.row())


def read_csv(path):
    """Inverse of emit_csv (run ids are not persisted)."""
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_COLUMNS:
            raise ValueError("unexpected CSV header")
        for row in reader:
            records.append(
                BenchRecord(
                    precision=row[0],
                    algorithm=row[1],
                    method=row[2],
                    kernel=row[3],
                    n=int(row[4]),
                    K=int(row[5]),
                    splits=int(row[6]),
                    threads=int(row[7]),
                    rep_median_seconds=float(row[8]),
                    max_relerr=row[9],
                    seed=int(row[10]),
                    status=row[11],
                )
            )
    return records
