"""mpclu command line.

    mpclu bench        LU benchmark sweep, CSV output
    mpclu matmul-bench complex matmul timing over the same kernel axes
    mpclu verify       quick invariant suites (eft / scalar / matmul / lu)

Exit codes: 0 success, 1 invalid configuration, 2 singular matrix in any
case when --strict (and verify failures).
"""

import sys

import click

from .bench import BenchConfig, emit_csv, run_bench, run_matmul_bench


def _parse_sweep(spec, n):
    if not spec:
        return []
    parts = spec.split(":")
    if len(parts) == 1:
        return [int(parts[0])]
    if len(parts) == 2:
        lo, hi = int(parts[0]), int(parts[1])
        step = 32
    elif len(parts) == 3:
        lo, hi, step = (int(p) for p in parts)
    else:
        raise click.UsageError("--k-sweep expects LO:HI:STEP")
    if step < 1:
        raise click.UsageError("--k-sweep step must be >= 1")
    values = list(range(lo, hi + 1, step))
    if not values:
        raise click.UsageError(f"--k-sweep {spec!r} selects no panel widths")
    return values


def _parse_threads(spec):
    return [int(t) for t in spec.split(",") if t.strip()]


_common = [
    click.option("--prec", type=click.Choice(["dd", "td", "qd"]), default="dd", show_default=True),
    click.option("--method", type=click.Choice(["3m", "4m"]), default="3m", show_default=True),
    click.option(
        "--kernel",
        type=click.Choice(["naive", "blocked", "strassen", "ozaki"]),
        default="ozaki",
        show_default=True,
    ),
    click.option("--n", "n", type=int, default=256, show_default=True),
    click.option("--splits", type=int, default=None, help="Ozaki division count (default per precision)."),
    click.option("--block", type=int, default=16, show_default=True),
    click.option("--threshold", type=int, default=32, show_default=True),
    click.option("--threads", default="1", show_default=True, help="Comma-separated list."),
    click.option("--seed", type=int, default=1, show_default=True),
    click.option("--reps", type=int, default=3, show_default=True),
    click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None),
]


def _apply_common(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


@click.group()
def cli():
    """Multiple-precision complex LU / matmul benchmarks."""


@cli.command()
@_apply_common
@click.option("--algo", type=click.Choice(["normal", "blocked"]), default="blocked", show_default=True)
@click.option("--k-sweep", "k_sweep", default="", help="Panel widths LO:HI:STEP (default 32:n:32).")
@click.option("--verify", is_flag=True, help="Check PA = LU reconstruction per case.")
@click.option("--strict", is_flag=True, help="Exit 2 if any case fails.")
def bench(prec, method, kernel, n, splits, block, threshold, threads, seed, reps, csv_path,
          algo, k_sweep, verify, strict):
    """Factorize and solve seeded random systems over a K sweep."""
    cfg = BenchConfig(
        precision=prec,
        algorithm=algo,
        method=method,
        kernel=kernel,
        n=n,
        seed=seed,
        k_values=_parse_sweep(k_sweep, n),
        splits=splits,
        block=block,
        threshold=threshold,
        threads=_parse_threads(threads),
        reps=reps,
        verify=verify,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise click.UsageError(str(exc))
    records = run_bench(cfg)
    _finish(records, csv_path, strict)


@cli.command("matmul-bench")
@_apply_common
@click.option("--check", is_flag=True, help="Also measure error against the k=8 reference.")
@click.option("--strict", is_flag=True)
def matmul_bench(prec, method, kernel, n, splits, block, threshold, threads, seed, reps,
                 csv_path, check, strict):
    """Time one complex matrix product per thread count."""
    cfg = BenchConfig(
        precision=prec,
        algorithm="blocked",
        method=method,
        kernel=kernel,
        n=n,
        seed=seed,
        splits=splits,
        block=block,
        threshold=threshold,
        threads=_parse_threads(threads),
        reps=reps,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise click.UsageError(str(exc))
    records = run_matmul_bench(cfg, check=check)
    _finish(records, csv_path, strict)


def _finish(records, csv_path, strict):
    for rec in records:
        click.echo(
            f"{rec.precision} {rec.algorithm} {rec.method}/{rec.kernel} n={rec.n} "
            f"K={rec.K} d={rec.splits} t={rec.threads}: "
            f"{rec.rep_median_seconds:.4f}s relerr={rec.max_relerr} [{rec.status}]"
        )
    if csv_path:
        emit_csv(records, csv_path)
        click.echo(f"wrote {csv_path}")
    if strict and any(r.status != "ok" for r in records):
        sys.exit(2)


@cli.command()
@click.option(
    "--suite",
    type=click.Choice(["eft", "scalar", "matmul", "lu"]),
    required=True,
)
@click.option("--seed", type=int, default=1, show_default=True)
def verify(suite, seed):
    """Run one invariant suite and report pass/fail per check."""
    from . import _verify

    failures = _verify.run_suite(suite, seed)
    if failures:
        sys.exit(2)


def main():
    try:
        cli(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)


if __name__ == "__main__":
    main()
