"""Exact arithmetic kernel: rationals, square roots of rationals, and
two-term square-root expressions, plus certified rational enclosures.

Every comparison made by the rest of the package bottoms out here.  The
three-way comparisons are decided algebraically (sign analysis plus a
squaring cascade) and never approximate; enclosures are used only to
separate values already proven unequal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction

# Arbitrary-precision rational.  fractions.Fraction keeps the denominator
# positive and gcd-reduces after every operation, which is exactly the
# canonical form the kernel relies on.
Rat = Fraction

ZERO = Fraction(0)


class Ordering(IntEnum):
    """Result of an exact three-way comparison."""

    LT = -1
    EQ = 0
    GT = 1


def _ordering(c: int) -> Ordering:
    return Ordering.LT if c < 0 else (Ordering.GT if c > 0 else Ordering.EQ)


def rat_sign(r: Rat) -> int:
    return (r > 0) - (r < 0)


def rational_sqrt(r: Rat) -> Rat | None:
    """Exact square root of ``r`` if it is the square of a rational, else None.

    A reduced fraction a/b is a rational square iff a and b are both
    integer squares.
    """
    if r < 0:
        return None
    a, b = r.numerator, r.denominator
    sa, sb = math.isqrt(a), math.isqrt(b)
    if sa * sa == a and sb * sb == b:
        return Fraction(sa, sb)
    return None


def sqrt_bounds(r: Rat, width: Rat) -> tuple[Rat, Rat]:
    """Certified rational enclosure of sqrt(r): lo <= sqrt(r) <= hi, hi - lo <= width.

    Seeded by an integer square root at a scale chosen so a single isqrt
    lands inside the requested width; exact squares return a zero-width
    enclosure.
    """
    if r < 0:
        raise ValueError("sqrt_bounds requires a nonnegative argument")
    if width <= 0:
        raise ValueError("sqrt_bounds requires a positive width")
    exact = rational_sqrt(r)
    if exact is not None:
        return exact, exact
    a, b = r.numerator, r.denominator
    # sqrt(a/b) = sqrt(a*b)/b; with s = isqrt(a*b*4^k), the enclosure
    # [s, s+1]/(2^k b) has width 1/(2^k b).
    need = -(-width.denominator // (width.numerator * b))  # ceil(wd/(wn*b))
    k = max(0, (need - 1).bit_length())
    s = math.isqrt((a * b) << (2 * k))
    den = b << k
    return Fraction(s, den), Fraction(s + 1, den)


@dataclass(frozen=True)
class QRoot:
    """A real of the form sign * sqrt(square) with rational square >= 0.

    Canonical: sign == 0 iff square == 0, so structural equality is value
    equality.  Instances are immutable and safe to share across threads.
    """

    sign: int
    square: Rat

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign!r}")
        sq = self.square if isinstance(self.square, Fraction) else Fraction(self.square)
        if sq < 0:
            raise ValueError(f"square must be nonnegative, got {sq}")
        if (self.sign == 0) != (sq == 0):
            raise ValueError("sign is 0 exactly when square is 0")
        object.__setattr__(self, "square", sq)

    @classmethod
    def sqrt(cls, square: Rat | int) -> "QRoot":
        """The nonnegative root sqrt(square)."""
        sq = Fraction(square)
        return cls(0 if sq == 0 else 1, sq)

    @classmethod
    def of_rational(cls, r: Rat | int) -> "QRoot":
        """Embed a rational r as sign(r) * sqrt(r^2)."""
        r = Fraction(r)
        return cls(rat_sign(r), r * r)

    @classmethod
    def scaled_root(cls, m: Rat | int, s: Rat) -> "QRoot":
        """m * sqrt(s) for rational m and s >= 0."""
        m = Fraction(m)
        sq = m * m * s
        return cls(0 if sq == 0 else rat_sign(m), sq)

    def to_rational(self) -> Rat | None:
        """Exact rational value, or None if irrational."""
        root = rational_sqrt(self.square)
        return None if root is None else self.sign * root

    def __neg__(self) -> "QRoot":
        return QRoot(-self.sign, self.square)

    def __mul__(self, other: "QRoot") -> "QRoot":
        sq = self.square * other.square
        return QRoot(0 if sq == 0 else self.sign * other.sign, sq)

    def reciprocal(self) -> "QRoot":
        if self.sign == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return QRoot(self.sign, 1 / self.square)

    def approx(self) -> float:
        return self.sign * math.sqrt(self.square)

    def __lt__(self, other: "QRoot") -> bool:
        return qroot_cmp(self, other) is Ordering.LT

    def __le__(self, other: "QRoot") -> bool:
        return qroot_cmp(self, other) is not Ordering.GT

    def __gt__(self, other: "QRoot") -> bool:
        return qroot_cmp(self, other) is Ordering.GT

    def __ge__(self, other: "QRoot") -> bool:
        return qroot_cmp(self, other) is not Ordering.LT

    def __str__(self) -> str:
        if self.sign == 0:
            return "0"
        prefix = "-" if self.sign < 0 else ""
        return f"{prefix}sqrt({self.square})"


def qroot_cmp(a: QRoot, b: QRoot) -> Ordering:
    """Exact three-way comparison of two square-root values.

    Decided by sign comparison, then by comparing squares (order reversed
    on the negative side).  Never approximates.
    """
    if a.sign != b.sign:
        return _ordering(a.sign - b.sign)
    if a.sign == 0:
        return Ordering.EQ
    c = (a.square > b.square) - (a.square < b.square)
    return _ordering(c if a.sign > 0 else -c)


@dataclass(frozen=True)
class RootExpr:
    """A two-term square-root expression p*sqrt(A) + q*sqrt(B).

    Canonical form: zero terms are normalized to (0, 0), equal radicands
    are merged, and the terms are ordered so A <= B.
    """

    p: Rat
    A: Rat
    q: Rat
    B: Rat

    def __post_init__(self) -> None:
        p, A = Fraction(self.p), Fraction(self.A)
        q, B = Fraction(self.q), Fraction(self.B)
        if A < 0 or B < 0:
            raise ValueError("radicands must be nonnegative")
        if p == 0 or A == 0:
            p, A = ZERO, ZERO
        if q == 0 or B == 0:
            q, B = ZERO, ZERO
        if A == B and A != 0:
            p, A, q, B = p + q, A, ZERO, ZERO
            if p == 0:
                A = ZERO
        if A > B:
            p, A, q, B = q, B, p, A
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "B", B)

    @classmethod
    def from_qroot(cls, c: QRoot) -> "RootExpr":
        return cls(Fraction(c.sign), c.square, ZERO, ZERO)

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def approx(self) -> float:
        return float(self.p) * math.sqrt(self.A) + float(self.q) * math.sqrt(self.B)

    def __str__(self) -> str:
        return f"{self.p}*sqrt({self.A}) + {self.q}*sqrt({self.B})"


def _root_sum_sign(p: Rat, A: Rat, q: Rat, B: Rat) -> int:
    """Exact sign of p*sqrt(A) + q*sqrt(B)."""
    ta = 0 if (p == 0 or A == 0) else rat_sign(p)
    tb = 0 if (q == 0 or B == 0) else rat_sign(q)
    if ta == 0:
        return tb
    if tb == 0 or ta == tb:
        return ta
    # Opposite signs: |p|sqrt(A) vs |q|sqrt(B) reduces to comparing squares.
    c = (p * p * A > q * q * B) - (p * p * A < q * q * B)
    return ta * c


def rootexpr_sign(e: RootExpr) -> int:
    return _root_sum_sign(e.p, e.A, e.q, e.B)


def rootexpr_cmp(e: RootExpr, c: QRoot) -> Ordering:
    """Exact three-way comparison of p*sqrt(A) + q*sqrt(B) against sign*sqrt(C).

    Equality is decided algebraically: squaring the (same-signed) sides
    reduces the question to one radical against a rational, and squaring
    once more to a rational identity.  No numerical refinement is involved,
    so ties at atoms are exact.
    """
    sl = rootexpr_sign(e)
    sr = c.sign
    if sl != sr:
        return _ordering(sl - sr)
    if sl == 0:
        return Ordering.EQ
    # Same nonzero sign: compare squares, flipping the order on the
    # negative side.  e^2 = p^2 A + q^2 B + 2pq sqrt(AB), so
    # e^2 - C has the sign of 2pq*sqrt(AB) - D with D = C - p^2 A - q^2 B.
    D = c.square - e.p * e.p * e.A - e.q * e.q * e.B
    g = e.A * e.B
    s2 = 0 if g == 0 else rat_sign(e.p) * rat_sign(e.q)
    sd = rat_sign(D)
    if s2 != sd:
        csq = -1 if s2 < sd else 1
    elif s2 == 0:
        csq = 0
    else:
        lhs2 = 4 * e.p * e.p * e.q * e.q * g
        rhs2 = D * D
        cg = (lhs2 > rhs2) - (lhs2 < rhs2)
        csq = cg if s2 > 0 else -cg
    return _ordering(csq if sl > 0 else -csq)


@dataclass(frozen=True)
class CertInterval:
    """A certified rational enclosure [lo, hi] of a real value.

    Producers are responsible for the containment proof; the arithmetic
    here (exact rational endpoint operations) preserves it.
    """

    lo: Rat
    hi: Rat

    def __post_init__(self) -> None:
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval: lo={lo} > hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, r: Rat | int) -> "CertInterval":
        r = Fraction(r)
        return cls(r, r)

    @property
    def width(self) -> Rat:
        return self.hi - self.lo

    def contains(self, r: Rat) -> bool:
        return self.lo <= r <= self.hi

    def intersects(self, other: "CertInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def strictly_below(self, other: "CertInterval") -> bool:
        return self.hi < other.lo

    def strictly_above(self, other: "CertInterval") -> bool:
        return self.lo > other.hi

    def __add__(self, other: "CertInterval") -> "CertInterval":
        return CertInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "CertInterval") -> "CertInterval":
        return CertInterval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "CertInterval":
        return CertInterval(-self.hi, -self.lo)

    def __mul__(self, other: "CertInterval") -> "CertInterval":
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return CertInterval(min(products), max(products))

    def scale(self, r: Rat | int) -> "CertInterval":
        r = Fraction(r)
        if r >= 0:
            return CertInterval(r * self.lo, r * self.hi)
        return CertInterval(r * self.hi, r * self.lo)

    def reciprocal(self) -> "CertInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return CertInterval(1 / self.hi, 1 / self.lo)

    def clamp(self, lo: Rat | int, hi: Rat | int) -> "CertInterval":
        return CertInterval(max(Fraction(lo), self.lo), min(Fraction(hi), self.hi))

    def sqrt(self, width: Rat) -> "CertInterval":
        """Enclosure of sqrt over a nonnegative interval."""
        if self.lo < 0:
            raise ValueError("sqrt of an interval with negative endpoint")
        lo, _ = sqrt_bounds(self.lo, width)
        _, hi = sqrt_bounds(self.hi, width)
        return CertInterval(lo, hi)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def qroot_interval(c: QRoot, width: Rat) -> CertInterval:
    """Certified enclosure of a QRoot value with hi - lo <= width."""
    if c.sign == 0:
        return CertInterval.point(ZERO)
    lo, hi = sqrt_bounds(c.square, width)
    if c.sign > 0:
        return CertInterval(lo, hi)
    return CertInterval(-hi, -lo)


def interval_refine(e: RootExpr, width: Rat) -> CertInterval:
    """Certified enclosure of a RootExpr value with hi - lo <= width.

    Each radical gets an outward-rounded enclosure sized so the combined
    width stays within budget; exact cancellations (zero expressions)
    produce genuine zero-width intervals.
    """
    if width <= 0:
        raise ValueError("interval_refine requires a positive width")
    weight = abs(e.p) + abs(e.q)
    if weight == 0:
        return CertInterval.point(ZERO)
    per_root = width / (2 * weight)
    total = CertInterval.point(ZERO)
    for coeff, radicand in ((e.p, e.A), (e.q, e.B)):
        if coeff == 0:
            continue
        lo, hi = sqrt_bounds(radicand, per_root)
        total = total + CertInterval(lo, hi).scale(coeff)
    return total
