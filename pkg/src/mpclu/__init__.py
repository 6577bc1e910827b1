"""Multiple-precision complex linear algebra on multi-component expansions.

Double-double / triple-double / quad-double arithmetic built on error-free
transformations, complex matrix multiplication via the 3M formula over
interchangeable real kernels (naive, blocked, Strassen, Ozaki scheme), and
complex LU decomposition (element-wise and blocked) with partial pivoting,
plus a reproducible benchmark harness.
"""

from .eft import two_sum, quick_two_sum, two_prod, split, HAVE_FMA
from .expansion import (
    Expansion,
    PRECISIONS,
    PRECISION_BITS,
    REFERENCE_K,
    eps_for,
    digits_for,
    exp_add,
    exp_sub,
    exp_mul,
    exp_div,
    exp_from_string,
    exp_to_string,
    nonoverlapping,
    renormalize,
)
from .cscalar import ComplexScalar, cadd, csub, cmul_3m, cmul_4m, cdiv, cinv
from .rmatrix import RealMatrix, mat_add, mat_sub
from .rgemm import (
    rgemm_naive,
    rgemm_blocked,
    rgemm_strassen,
    real_kernel_calls,
    reset_real_kernel_calls,
)
from .ozaki import SplitStack, ozaki_split, rgemm_ozaki, split_exactness_bound
from .cmatrix import PlanarComplexMatrix, KernelChoice, cgemm, cgemm_3m, cgemm_4m
from .lu import (
    ComplexVector,
    LUFactors,
    LinearSystem,
    SingularMatrixError,
    lu_normal,
    lu_blocked,
    trsm_unit_lower,
    solve,
    max_rel_err,
)
from .bench import (
    BenchConfig,
    BenchRecord,
    CSV_COLUMNS,
    gen_problem,
    reference_rhs,
    run_bench,
    emit_csv,
    read_csv,
)

__version__ = "0.1.0"
