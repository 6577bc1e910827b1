"""Multi-component extended-precision reals (expansions).

A value is stored as an unevaluated sum of k binary64 components, most
significant first, pairwise nonoverlapping: |c[j+1]| <= ulp(c[j])/2.
k = 2, 3, 4 give double-double, triple-double and quad-double working
precisions (106, 159 and 212 mantissa bits); k = 8 (~424 bits) serves as
the in-package reference precision for oracles.

All arithmetic is pure value-to-value and safe to use concurrently.
Subnormal-range behaviour is out of contract, as are square roots and
transcendentals.
"""

import math
import re as _re
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from . import _kernels as _k

PRECISIONS = {"dd": 2, "td": 3, "qd": 4}
PRECISION_BITS = {2: 106, 3: 159, 4: 212}
REFERENCE_K = 8


def eps_for(k):
    """Unit round-off of a k-component expansion: 2^(1 - 53k)."""
    return math.ldexp(1.0, 1 - 53 * k)


def digits_for(k):
    """Decimal digits carried by a k-component expansion."""
    return int(math.floor(53 * k * math.log10(2.0)))


_NUMBER_RE = _re.compile(
    r"^(?P<sign>[+-])?(?P<int>\d+)(?:\.(?P<frac>\d*))?(?:[eE](?P<exp>[+-]?\d+))?$"
)


class Expansion:
    """A k-component nonoverlapping expansion, most significant first."""

    __slots__ = ("components",)

    def __init__(self, components):
        arr = np.ascontiguousarray(components, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] < 1:
            raise ValueError("components must be a nonempty 1-D sequence")
        if np.isnan(arr).any():
            raise ValueError("NaN component in expansion")
        self.components = arr

    @property
    def k(self):
        return self.components.shape[0]

    @classmethod
    def from_float(cls, v, k):
        arr = np.zeros(k)
        arr[0] = float(v)
        return cls(arr)

    @classmethod
    def zero(cls, k):
        return cls(np.zeros(k))

    @classmethod
    def from_fraction(cls, f, k):
        """Round an exact rational to k components (each step exact)."""
        arr = np.zeros(k)
        rem = Fraction(f)
        for i in range(k):
            c = float(rem)
            arr[i] = c
            rem -= Fraction(c)
            if rem == 0:
                break
        return cls(arr)

    def to_fraction(self):
        total = Fraction(0)
        for c in self.components:
            total += Fraction(float(c))
        return total

    def to_float(self):
        return float(self.components[0])

    __float__ = to_float

    def is_zero(self):
        return self.components[0] == 0.0

    def __neg__(self):
        return Expansion(-self.components)

    def __abs__(self):
        return -self if self.components[0] < 0.0 else self

    def __add__(self, other):
        return exp_add(self, _coerce(other, self.k))

    def __radd__(self, other):
        return exp_add(_coerce(other, self.k), self)

    def __sub__(self, other):
        return exp_sub(self, _coerce(other, self.k))

    def __rsub__(self, other):
        return exp_sub(_coerce(other, self.k), self)

    def __mul__(self, other):
        return exp_mul(self, _coerce(other, self.k))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return exp_div(self, _coerce(other, self.k))

    def __rtruediv__(self, other):
        return exp_div(_coerce(other, self.k), self)

    def __eq__(self, other):
        if isinstance(other, Expansion):
            return bool(np.array_equal(self.components, other.components))
        return self.to_fraction() == Fraction(other)

    def __hash__(self):
        return hash(self.components.tobytes())

    def __repr__(self):
        body = ", ".join(repr(float(c)) for c in self.components)
        return f"Expansion([{body}])"

    def __str__(self):
        return exp_to_string(self)


def _coerce(v, k):
    if isinstance(v, Expansion):
        return v
    return Expansion.from_float(v, k)


def _check_pair(x, y):
    if x.k != y.k:
        raise ValueError(f"component counts differ: {x.k} != {y.k}")
    return x.k


def nonoverlapping(arr):
    """True when arr satisfies |c[j+1]| <= ulp(c[j])/2 down the chain
    (a zero component forces all lower components to zero)."""
    a = np.asarray(arr, dtype=np.float64)
    return bool(_k.nonoverlapping1(a, a.shape[0]))


def renormalize(raw, k):
    """Collapse an arbitrary list of binary64 values into a k-component
    expansion representing their exact sum rounded to k-component precision.

    Magnitude sort, then an error-free accumulation sweep, then extraction
    of the significant residues (the sweep re-runs on rare marginal
    overlaps after cancellation).
    """
    arr = np.ascontiguousarray(raw, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ValueError("raw must be a nonempty 1-D sequence")
    if not np.isfinite(arr).all():
        raise ValueError("raw values must be finite")
    return Expansion(_k.renorm1(arr, k))


def exp_add(x, y):
    k = _check_pair(x, y)
    return Expansion(_k.exp_add1(x.components, y.components, k))


def exp_sub(x, y):
    k = _check_pair(x, y)
    return Expansion(_k.exp_sub1(x.components, y.components, k))


def exp_mul(x, y):
    k = _check_pair(x, y)
    return Expansion(_k.exp_mul1(x.components, y.components, k))


def exp_div(x, y):
    k = _check_pair(x, y)
    if y.is_zero():
        raise ZeroDivisionError("singular scalar divide")
    return Expansion(_k.exp_div1(x.components, y.components, k))


def exp_to_string(x, digits=None):
    """Decimal string of an expansion, correctly rounded to `digits`
    significant digits (defaults to the precision the k components carry)."""
    if digits is None:
        digits = digits_for(x.k)
    f = x.to_fraction()
    if f == 0:
        return "0.0"
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(f.numerator) / Decimal(f.denominator)
    s = str(d)
    if "E" in s:
        s = s.replace("E", "e")
    elif "." not in s:
        s += ".0"
    return s


def exp_from_string(s, k):
    """Parse a decimal string (sign, digits, optional fraction, optional
    e-exponent) into a k-component expansion, correctly rounded."""
    m = _NUMBER_RE.match(s.strip())
    if not m:
        raise ValueError(f"malformed decimal string: {s!r}")
    intpart = m.group("int")
    frac = m.group("frac") or ""
    exp = int(m.group("exp") or 0)
    num = int(intpart + frac)
    if m.group("sign") == "-":
        num = -num
    f = Fraction(num, 1) * Fraction(10) ** (exp - len(frac))
    return Expansion.from_fraction(f, k)
