"""Error-free transformations on binary64 scalars.

These are the pure-Python reference forms; the compiled kernels inline the
same formulas.  Both produce identical bits because every operation is a
single correctly-rounded IEEE binary64 operation.
"""

import math

SPLITTER = 134217729.0  # 2^27 + 1

# math.fma landed in Python 3.13; on older interpreters only the Dekker
# path exists and the fma/Dekker equivalence check is skipped.
_FMA = getattr(math, "fma", None)

HAVE_FMA = _FMA is not None


def two_sum(a, b):
    """Return (s, e) with s = fl(a+b) and s + e == a + b exactly.

    Requires finite a, b; if a+b overflows, s is infinite and e is
    meaningless (documented, not trapped).
    """
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a, b):
    """two_sum specialised to |a| >= |b| (or a == 0)."""
    s = a + b
    e = b - (s - a)
    return s, e


def split(a):
    """Dekker split: a == hi + lo with both halves 26/27-bit."""
    c = SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    """Return (p, e) with p = fl(a*b) and p + e == a * b exactly.

    Valid while the exact product neither overflows nor falls into the
    subnormal range (|a|, |b| below ~2^970 and product above ~2^-968).
    """
    p = a * b
    ahi, alo = split(a)
    bhi, blo = split(b)
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


def two_prod_fma(a, b):
    """FMA-based two_prod; bit-identical to the Dekker form where both
    are defined.  Only available on interpreters that expose math.fma."""
    if _FMA is None:
        raise RuntimeError("math.fma is not available on this interpreter")
    p = a * b
    return p, _FMA(a, b, -p)
