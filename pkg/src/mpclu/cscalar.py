"""Complex arithmetic over expansions.

Multiplication comes in two flavours: the 4M form (four real products) and
the 3M form (three real products plus extra additions):

    t1 = Re(a) Re(b),  t2 = Im(a) Im(b)
    ab = (t1 - t2) + ((Re(a) + Im(a)) (Re(b) + Im(b)) - t1 - t2) i

Both real parts are the same expression evaluated in the same order, so
they agree bitwise.  Which form is used is always an explicit caller
choice; nothing here switches on a heuristic.

Division uses the plain d = Re(b)^2 + Im(b)^2 form without Smith scaling:
the target domain ([0, 1] matrix entries, pivoted elimination) keeps d far
from the binary64 range limits.
"""

from dataclasses import dataclass

from .expansion import Expansion, exp_add, exp_div, exp_mul, exp_sub


@dataclass(frozen=True)
class ComplexScalar:
    """A complex number with expansion real and imaginary parts."""

    re: Expansion
    im: Expansion

    def __post_init__(self):
        if self.re.k != self.im.k:
            raise ValueError("real and imaginary parts must share k")

    @property
    def k(self):
        return self.re.k

    @classmethod
    def from_complex(cls, z, k):
        z = complex(z)
        return cls(Expansion.from_float(z.real, k), Expansion.from_float(z.imag, k))

    @classmethod
    def zero(cls, k):
        return cls(Expansion.zero(k), Expansion.zero(k))

    @classmethod
    def one(cls, k):
        return cls(Expansion.from_float(1.0, k), Expansion.zero(k))

    def to_complex(self):
        return complex(self.re.to_float(), self.im.to_float())

    def is_zero(self):
        return self.re.is_zero() and self.im.is_zero()

    def __neg__(self):
        return ComplexScalar(-self.re, -self.im)

    def __repr__(self):
        return f"ComplexScalar({self.re!r}, {self.im!r})"


def _check(a, b):
    if a.k != b.k:
        raise ValueError(f"component counts differ: {a.k} != {b.k}")


def cadd(a, b):
    _check(a, b)
    return ComplexScalar(exp_add(a.re, b.re), exp_add(a.im, b.im))


def csub(a, b):
    _check(a, b)
    return ComplexScalar(exp_sub(a.re, b.re), exp_sub(a.im, b.im))


def cmul_4m(a, b):
    """Four real multiplications:
    (Re a Re b - Im a Im b) + (Im a Re b + Re a Im b) i.
    """
    _check(a, b)
    re = exp_sub(exp_mul(a.re, b.re), exp_mul(a.im, b.im))
    im = exp_add(exp_mul(a.im, b.re), exp_mul(a.re, b.im))
    return ComplexScalar(re, im)


def cmul_3m(a, b):
    """Three real multiplications; real part is bitwise the 4M real part."""
    _check(a, b)
    t1 = exp_mul(a.re, b.re)
    t2 = exp_mul(a.im, b.im)
    re = exp_sub(t1, t2)
    im = exp_sub(exp_sub(exp_mul(exp_add(a.re, a.im), exp_add(b.re, b.im)), t1), t2)
    return ComplexScalar(re, im)


def cdiv(a, b):
    """a / b via d = Re(b)^2 + Im(b)^2."""
    _check(a, b)
    if b.is_zero():
        raise ZeroDivisionError("singular scalar divide")
    d = exp_add(exp_mul(b.re, b.re), exp_mul(b.im, b.im))
    nre = exp_add(exp_mul(a.re, b.re), exp_mul(a.im, b.im))
    nim = exp_sub(exp_mul(a.im, b.re), exp_mul(a.re, b.im))
    return ComplexScalar(exp_div(nre, d), exp_div(nim, d))


def cinv(b):
    """Reciprocal: cdiv(1, b)."""
    return cdiv(ComplexScalar.one(b.k), b)
