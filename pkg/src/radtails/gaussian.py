"""Certified rational enclosures of the standard normal upper tail, and the
Berry-Esseen machinery that turns them into finite statements about
equal-weight Rademacher tails.

Everything is computed in exact rational arithmetic with proven two-sided
truncation bounds; no unverified floating point enters the chain:

* the Gaussian integral int_0^x exp(-u^2/2) du equals x * S(x^2) where
  S(y) = sum_k (-1)^k y^k / (2^k k! (2k+1)) is alternating with eventually
  decreasing terms, so a partial sum plus the first omitted term encloses it;
* pi is enclosed by a Machin arctangent combination whose series are
  alternating from the first term on;
* square roots are enclosed by scaled integer square roots.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactnum import CertInterval, QRoot, Rat, sqrt_bounds

#: Smallest established value of the absolute Berry-Esseen constant for
#: i.i.d. summands; the third absolute moment of a Rademacher variable is 1.
BE_CONSTANT = Fraction(4748, 10000)

#: Default absolute width of a normal-tail enclosure.  Tight enough to
#: reproduce the reference thresholds to well under 1% and to separate the
#: series values from the normal tail through n = 15/16.
DEFAULT_WIDTH = Fraction(1, 10**9)

_ENV_MAX_WIDTH_BITS = "RADTAILS_MAX_WIDTH_BITS"
_DEFAULT_MAX_WIDTH_BITS = 4096


class EnclosureWidthError(ArithmeticError):
    """Requested enclosure width unreachable under the refinement-depth cap."""


class NoFiniteThresholdError(ArithmeticError):
    """The target probability does not exceed the normal-tail upper bound."""


def max_width_bits() -> int:
    """Refinement-depth cap in bits, overridable via RADTAILS_MAX_WIDTH_BITS."""
    raw = os.environ.get(_ENV_MAX_WIDTH_BITS)
    if raw is None:
        return _DEFAULT_MAX_WIDTH_BITS
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{_ENV_MAX_WIDTH_BITS} must be an integer, got {raw!r}") from exc
    if value < 8:
        raise ValueError(f"{_ENV_MAX_WIDTH_BITS} must be at least 8, got {value}")
    return value


@dataclass(frozen=True)
class BEConfig:
    """Berry-Esseen constant used in bands and thresholds."""

    C: Rat = BE_CONSTANT

    def __post_init__(self) -> None:
        if self.C <= 0:
            raise ValueError("Berry-Esseen constant must be positive")


@dataclass(frozen=True)
class NormalTailEnclosure:
    """A certified enclosure of the normal upper tail at x."""

    x: QRoot
    bounds: CertInterval


def _atan_inv_bounds(q: int, tol: Fraction) -> CertInterval:
    """Enclosure of arctan(1/q) for integer q >= 2, by the alternating series."""
    s = Fraction(0)
    k = 0
    power = q  # q^(2k+1)
    while True:
        term = Fraction(1, (2 * k + 1) * power)
        s += -term if k & 1 else term
        k += 1
        power *= q * q
        nxt = Fraction(1, (2 * k + 1) * power)
        if nxt <= tol:
            # The next term has sign (-1)^k; the limit lies between s and s + that term.
            if k & 1:
                return CertInterval(s - nxt, s)
            return CertInterval(s, s + nxt)


@lru_cache(maxsize=None)
def _pi_bounds(bits: int) -> CertInterval:
    """Enclosure of pi of width <= 2^-bits via pi = 16*atan(1/5) - 4*atan(1/239)."""
    tol = Fraction(1, 1 << (bits + 6))
    a5 = _atan_inv_bounds(5, tol)
    a239 = _atan_inv_bounds(239, tol)
    return a5.scale(16) - a239.scale(4)


def _gauss_integral_series(y: Fraction, tol: Fraction) -> CertInterval:
    """Enclosure of S(y) = sum (-1)^k y^k / (2^k k! (2k+1)).

    x*S(x^2) is the Gaussian integral from 0 to x.  The term ratio
    y(2k+1)/((2k+2)(2k+3)) decreases in k, so once a term drops below its
    predecessor the alternating remainder bound applies from then on.
    """
    s = Fraction(0)
    t = Fraction(1)  # y^k / (2^k k!)
    k = 0
    while True:
        term = t / (2 * k + 1)
        s += -term if k & 1 else term
        k += 1
        t = t * y / (2 * k)
        nxt = t / (2 * k + 1)
        if nxt < term and nxt <= tol:
            if k & 1:
                return CertInterval(s - nxt, s)
            return CertInterval(s, s + nxt)


@lru_cache(maxsize=4096)
def _phi_bar_at_bits(square: Fraction, sign: int, bits: int) -> CertInterval:
    """One refinement pass of the normal-tail enclosure at ~2^-bits precision."""
    tol = Fraction(1, 1 << bits)
    series = _gauss_integral_series(square, tol).clamp(0, 2)
    xlo, xhi = sqrt_bounds(square, tol)
    integral = CertInterval(xlo, xhi) * series  # int_0^|x| exp(-u^2/2) du
    two_pi = _pi_bounds(bits).scale(2)
    root_lo, _ = sqrt_bounds(two_pi.lo, tol)
    _, root_hi = sqrt_bounds(two_pi.hi, tol)
    inv_root = CertInterval(root_lo, root_hi).reciprocal()
    half = CertInterval.point(Fraction(1, 2))
    mass = integral * inv_root
    if sign > 0:
        return (half - mass).clamp(0, 1)
    return (half + mass).clamp(0, 1)


def normal_tail_bounds(
    x: QRoot, width: Rat = DEFAULT_WIDTH, *, max_bits: int | None = None
) -> NormalTailEnclosure:
    """Certified enclosure of the normal upper tail at x, of width <= width.

    Refinement doubles the working precision until the width target is
    met; raises EnclosureWidthError if the configured depth cap is reached
    first.  Every pass is independently certified, so enclosures produced
    at different widths always share the true tail value.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    if x.sign == 0:
        return NormalTailEnclosure(x, CertInterval.point(Fraction(1, 2)))
    cap = max_width_bits() if max_bits is None else max_bits
    bits = 32
    while True:
        bounds = _phi_bar_at_bits(x.square, x.sign, bits)
        if bounds.width <= width:
            return NormalTailEnclosure(x, bounds)
        if bits >= cap:
            raise EnclosureWidthError(
                f"cannot reach width {width} within {cap} refinement bits"
            )
        bits = min(2 * bits, cap)


def _inv_sqrt_upper(j: int) -> Rat:
    """A tight certified rational upper bound on 1/sqrt(j)."""
    lo, _ = sqrt_bounds(Fraction(j), Fraction(1, 1 << 64))
    return 1 / lo


def be_band(
    j: int,
    x: QRoot,
    *,
    config: BEConfig = BEConfig(),
    width: Rat = DEFAULT_WIDTH,
) -> CertInterval:
    """Certified interval containing the equal-weight tail P at j coordinates.

    The Berry-Esseen inequality bounds the tail's distance from the normal
    tail by C/sqrt(j) (third absolute moments are 1 here), so widening a
    certified normal-tail enclosure by a certified upper bound on C/sqrt(j)
    and clamping to [0, 1] is guaranteed to contain the exact tail.
    """
    if j < 1:
        raise ValueError("j must be a positive integer")
    phi = normal_tail_bounds(x, width).bounds
    slack = config.C * _inv_sqrt_upper(j)
    return CertInterval(phi.lo - slack, phi.hi + slack).clamp(0, 1)


def be_threshold(
    x: QRoot,
    p_target: Rat,
    *,
    config: BEConfig = BEConfig(),
    width: Rat = DEFAULT_WIDTH,
) -> int:
    """Smallest J with phi_hi(x) + C/sqrt(j) < p_target for every j > J.

    With delta = p_target - phi_hi > 0, the condition C/sqrt(j) < delta is
    exactly j > (C/delta)^2, a rational comparison, so J is the exact floor
    (or the value itself at an integer).  Using the enclosure's upper bound
    makes the threshold conservative: every j beyond it is certifiably
    disposed of by the Berry-Esseen inequality.
    """
    phi_hi = normal_tail_bounds(x, width).bounds.hi
    if p_target <= phi_hi:
        raise NoFiniteThresholdError(
            f"no finite threshold: target {p_target} does not exceed "
            f"the normal-tail upper bound {float(phi_hi):.6g}"
        )
    delta = p_target - phi_hi
    q = (config.C / delta) ** 2
    j_min = q.numerator // q.denominator
    return max(1, j_min)
