import numpy as np
import pytest

from mpclu.expansion import Expansion, renormalize


@pytest.fixture
def rng():
    return np.random.default_rng(20240801)


def rand_expansion(rng, k, span=0):
    """Random expansion with all k components carrying significand bits;
    leading magnitude ~2^span."""
    comps = [rng.uniform(-1.0, 1.0) * 2.0 ** span]
    for i in range(1, k):
        comps.append(rng.uniform(-1.0, 1.0) * abs(comps[0]) * 2.0 ** (-52 * i))
    return renormalize(comps, k)


def frac(x):
    """Exact rational value of an Expansion."""
    return x.to_fraction()


def rel_err_frac(approx, exact):
    """|approx - exact| / |exact| over exact rationals (exact = Fraction)."""
    if exact == 0:
        return abs(frac(approx) if isinstance(approx, Expansion) else approx)
    a = frac(approx) if isinstance(approx, Expansion) else approx
    return abs(a - exact) / abs(exact)
