import random
from fractions import Fraction

import pytest
from mpmath import erfc, mp, mpf
from mpmath import sqrt as msqrt


def phi_bar_reference(square: Fraction, sign: int, dps: int = 110):
    """High-precision reference of the normal upper tail at sign*sqrt(square)."""
    old = mp.dps
    mp.dps = dps
    try:
        x = sign * msqrt(mpf(square.numerator) / square.denominator)
        return erfc(x / msqrt(2)) / 2
    finally:
        mp.dps = old


def interval_contains_ref(bounds, square: Fraction, sign: int, dps: int = 110) -> bool:
    old = mp.dps
    mp.dps = dps  # endpoint conversion must happen at full precision too
    try:
        x = sign * msqrt(mpf(square.numerator) / square.denominator)
        ref = erfc(x / msqrt(2)) / 2
        lo = mpf(bounds.lo.numerator) / bounds.lo.denominator
        hi = mpf(bounds.hi.numerator) / bounds.hi.denominator
        return lo <= ref <= hi
    finally:
        mp.dps = old


def random_square(rng: random.Random, lo: Fraction, hi: Fraction, max_num=10**4, max_den=200) -> Fraction:
    """A random rational square in (lo, hi]."""
    while True:
        sq = Fraction(rng.randint(0, max_num), rng.randint(1, max_den))
        if lo < sq <= hi:
            return sq


@pytest.fixture(scope="session")
def rng():
    return random.Random(0xC0FFEE)
